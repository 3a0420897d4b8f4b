#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"
#include "pkgcalc/sat.hpp"

// The pkgcalc command line. Documents are the JSON interchange format unless
// a dialect is named; every output is deterministic.

namespace {

using namespace pkgcalc;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUnresolvable = 1;
constexpr int kInputError = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Dialect dialect_of(const std::string& s) {
    if (s == "json") return Dialect::Json;
    if (s == "debian") return Dialect::Debian;
    if (s == "cargo") return Dialect::Cargo;
    throw InvalidInput("unknown dialect " + s + " (json, debian, cargo)");
}

ExtensionStack stack_of(const std::string& tags, const ExtendedInstance& inst) {
    if (tags.empty()) return infer_stack(inst);
    ExtensionStack stack;
    std::stringstream ss(tags);
    std::string tag;
    while (std::getline(ss, tag, ',')) {
        auto t = parse_extension_tag(tag);
        if (!t) throw InvalidInput("unknown extension tag " + tag);
        stack.push_back(*t);
    }
    return stack;
}

// replaces the root's dependencies with a QueryDocument: a JSON array of
// {on, versions|formula} records
void apply_query(ExtendedInstance& inst, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid query JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("query document must be an array");
    for (auto it = inst.deps.begin(); it != inst.deps.end();)
        it = it->from == inst.root ? inst.deps.erase(it) : std::next(it);
    std::erase_if(inst.vdeps, [&](const FormulaDependency& d) { return d.from == inst.root; });
    for (const auto& e : doc) {
        if (!e.is_object() || !e.contains("on")) throw ParseError("query items need \"on\"");
        NameRef on = atom(e.at("on").get<std::string>());
        if (e.contains("formula")) {
            inst.vdeps.push_back(
                {inst.root, on, parse_version_formula(e.at("formula").get<std::string>())});
        } else if (e.contains("versions")) {
            VersionSet vs;
            for (const auto& v : e.at("versions"))
                vs.insert(parse_numeric_version(v.get<std::string>()));
            inst.deps.insert({inst.root, on, vs});
        } else {
            throw ParseError("query items need \"versions\" or \"formula\"");
        }
    }
}

// display-only rendering of a (possibly lowered, synthetic-name) instance
json display_instance(const CoreInstance& inst) {
    json doc;
    json packages = json::array();
    for (const auto& p : inst.repo.packages) {
        if (p == inst.root) continue;
        packages.push_back({{"name", to_string(p.name)}, {"version", to_string(p.version)}});
    }
    doc["packages"] = std::move(packages);
    json deps = json::array();
    for (const auto& d : inst.deps) {
        json vs = json::array();
        for (const auto& v : d.versions) vs.push_back(to_string(v));
        deps.push_back({{"from", to_string(d.from)},
                        {"on", to_string(d.on)},
                        {"versions", std::move(vs)}});
    }
    doc["dependencies"] = std::move(deps);
    return doc;
}

// a lowered selection referencing packages by their rendered form
Resolution parse_selection(const std::string& text, const Repository& repo) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid selection JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("selected")) doc = doc.at("selected");
    if (!doc.is_array()) throw ParseError("selection document must be an array");
    Resolution s;
    for (const auto& e : doc) {
        auto name = e.at("name").get<std::string>();
        auto version = e.at("version").get<std::string>();
        bool found = false;
        for (const auto& p : repo.packages)
            if (to_string(p.name) == name && to_string(p.version) == version) {
                s.selected.insert(p);
                found = true;
            }
        if (!found) throw InvalidInput("no such package " + name + "@" + version);
    }
    return s;
}

std::optional<Resolution> run_solver(const std::string& solver, const CoreInstance& core,
                                     bool prefer_fresh) {
    if (solver == "sat") return sat_resolve(core, prefer_fresh);
    if (solver == "brute") {
        auto all = enumerate_resolutions(core);
        if (all.empty()) return std::nullopt;
        if (prefer_fresh) {
            auto best = maximal_resolutions(all);
            return *best.rbegin();
        }
        return *all.begin();
    }
    if (solver == "mvs") {
        // set dependencies weaken to their lower bounds
        MinBoundDependencySet mdeps;
        for (const auto& d : core.deps) {
            if (d.versions.empty()) return std::nullopt;
            Version lo = *d.versions.begin();
            for (const auto& v : d.versions)
                if (compare_versions(v, lo) == Ordering::LT) lo = v;
            mdeps.insert({d.from, d.on, lo});
        }
        return mvs_resolve(core.repo, mdeps, core.root,
                           prefer_fresh ? MvsPolicy::Latest : MvsPolicy::Minimum);
    }
    if (solver == "greedy") {
        auto s = multiversion_greedy_resolve(core);
        if (!s) return std::nullopt;
        return Resolution{*s};
    }
    throw InvalidInput("unknown solver " + solver + " (sat, brute, mvs, greedy)");
}

int cli_main(int argc, char** argv) {
    CLI::App app{"package-calculus resolver and translator"};
    app.require_subcommand(1);

    std::string repo_path, query_path, solver = "sat", stack_tags, resolution_path;
    std::string from = "json", to = "json", dimacs_path, input_path;
    bool prefer_fresh = false, build_order = false, dot = false, include_root_edges = true;
    std::size_t limit = 1000;

    auto* resolve = app.add_subcommand("resolve", "resolve a repository document");
    resolve->add_option("--repo", repo_path)->required();
    resolve->add_option("--query", query_path);
    resolve->add_option("--solver", solver)->check(CLI::IsMember({"sat", "brute", "mvs", "greedy"}));
    resolve->add_flag("--prefer-fresh", prefer_fresh);
    resolve->add_option("--stack", stack_tags);

    auto* validate = app.add_subcommand("validate", "check a document (and optional resolution)");
    validate->add_option("--repo", repo_path)->required();
    validate->add_option("--resolution", resolution_path);
    validate->add_option("--stack", stack_tags);

    auto* enumerate = app.add_subcommand("enumerate", "list every resolution");
    enumerate->add_option("--repo", repo_path)->required();
    enumerate->add_option("--limit", limit);
    enumerate->add_option("--stack", stack_tags);

    auto* lower = app.add_subcommand("lower", "show the lowered core instance");
    lower->add_option("--repo", repo_path)->required();
    lower->add_option("--stack", stack_tags);

    auto* lift = app.add_subcommand("lift", "lift a lowered selection");
    lift->add_option("--repo", repo_path)->required();
    lift->add_option("--resolution", resolution_path)->required();
    lift->add_option("--stack", stack_tags);

    auto* trans = app.add_subcommand("translate", "translate between dialects");
    trans->add_option("input", input_path)->required();
    trans->add_option("--from", from);
    trans->add_option("--to", to);

    auto* gen = app.add_subcommand("gen-3sat", "3-SAT reduction to a repository");
    gen->add_option("--dimacs", dimacs_path)->required();

    auto* graph = app.add_subcommand("graph", "build graph of the resolved selection");
    graph->add_option("--repo", repo_path)->required();
    graph->add_option("--solver", solver)->check(CLI::IsMember({"sat", "brute"}));
    graph->add_flag("--build-order", build_order);
    graph->add_flag("--dot", dot);
    graph->add_flag("--include-root-edges,!--exclude-root-edges", include_root_edges);

    CLI11_PARSE(app, argc, argv);

    if (*resolve) {
        auto inst = parse_repo(slurp(repo_path));
        if (!query_path.empty()) apply_query(inst, slurp(query_path));
        auto stack = stack_of(stack_tags, inst);
        validate_stack(stack, inst);
        auto bundle = lower_stack(inst, stack);
        auto s = run_solver(solver, bundle.core, prefer_fresh);
        if (!s) {
            std::cout << "unresolvable\n";
            return kUnresolvable;
        }
        if (solver == "greedy") {
            // greedy drops uniqueness, so the selection stays unlifted
            json out = json::array();
            for (const auto& p : s->selected)
                out.push_back({{"name", to_string(p.name)}, {"version", to_string(p.version)}});
            std::cout << json{{"selected", std::move(out)}}.dump(2) << "\n";
            return kOk;
        }
        std::cout << emit_resolution(lift_stack(*s, bundle));
        return kOk;
    }

    if (*validate) {
        auto inst = parse_repo(slurp(repo_path));
        auto stack = stack_of(stack_tags, inst);
        validate_stack(stack, inst);
        auto bundle = lower_stack(inst, stack);
        for (const auto& w : check_well_formed(bundle.core))
            std::cout << "warning: " << w << "\n";
        if (!resolution_path.empty()) {
            auto s = parse_selection(slurp(resolution_path), bundle.core.repo);
            auto report = validate_resolution(bundle.core, s);
            if (!report.valid) {
                for (const auto& v : report.violations) std::cout << v.detail << "\n";
                std::cout << "invalid\n";
                return kUnresolvable;
            }
            std::cout << "valid\n";
            return kOk;
        }
        std::cout << "ok\n";
        return kOk;
    }

    if (*enumerate) {
        auto inst = parse_repo(slurp(repo_path));
        auto stack = stack_of(stack_tags, inst);
        validate_stack(stack, inst);
        auto bundle = lower_stack(inst, stack);
        json out = json::array();
        for (const auto& r : enumerate_resolutions(bundle.core, limit)) {
            json sel = json::array();
            for (const auto& p : lift_stack(r, bundle).base.selected)
                sel.push_back({{"name", to_string(p.name)}, {"version", to_string(p.version)}});
            out.push_back(std::move(sel));
        }
        std::cout << json{{"resolutions", std::move(out)}}.dump(2) << "\n";
        return kOk;
    }

    if (*lower) {
        auto inst = parse_repo(slurp(repo_path));
        auto stack = stack_of(stack_tags, inst);
        validate_stack(stack, inst);
        std::cout << display_instance(lower_stack(inst, stack).core).dump(2) << "\n";
        return kOk;
    }

    if (*lift) {
        auto inst = parse_repo(slurp(repo_path));
        auto stack = stack_of(stack_tags, inst);
        validate_stack(stack, inst);
        auto bundle = lower_stack(inst, stack);
        auto s = parse_selection(slurp(resolution_path), bundle.core.repo);
        auto report = validate_resolution(bundle.core, s);
        if (!report.valid) {
            for (const auto& v : report.violations) std::cout << v.detail << "\n";
            std::cout << "invalid\n";
            return kUnresolvable;
        }
        std::cout << emit_resolution(lift_stack(s, bundle));
        return kOk;
    }

    if (*trans) {
        std::cout << translate(slurp(input_path), dialect_of(from), dialect_of(to));
        return kOk;
    }

    if (*gen) {
        auto core = gen_from_3cnf(parse_dimacs(slurp(dimacs_path)));
        ExtendedInstance inst;
        inst.repo = core.repo;
        inst.deps = core.deps;
        inst.root = core.root;
        std::cout << emit_repo(inst);
        return kOk;
    }

    if (*graph) {
        auto inst = parse_repo(slurp(repo_path));
        ExtendedInstance stripped = inst;
        stripped.optionals.clear();
        auto stack = stack_of(stack_tags, stripped);
        validate_stack(stack, stripped);
        auto bundle = lower_stack(stripped, stack);
        auto s = run_solver(solver, bundle.core, false);
        if (!s) {
            std::cout << "unresolvable\n";
            return kUnresolvable;
        }
        auto g = build_graph(bundle.core, inst.optionals, *s, include_root_edges);
        if (dot) std::cout << to_dot(g);
        if (build_order || !dot) {
            auto order = topo_order(g);
            if (const auto* cycle = std::get_if<CycleReport>(&order)) {
                std::cout << "cycle:";
                for (const auto& p : cycle->cycle) std::cout << " " << to_string(p);
                std::cout << "\n";
                return kUnresolvable;
            }
            for (const auto& p : std::get<std::vector<Package>>(order))
                std::cout << to_string(p) << "\n";
        }
        return kOk;
    }

    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return cli_main(argc, argv);
    } catch (const StackError& e) {
        std::cerr << "error: invalid stack: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const EmitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const LimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
