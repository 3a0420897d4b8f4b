#include "pkgcalc/buildgraph.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace pkgcalc {

int compare(const GraphEdge& a, const GraphEdge& b) {
    if (int c = compare(a.depender, b.depender)) return c;
    return compare(a.dependee, b.dependee);
}

BuildGraph build_graph(const CoreInstance& inst, const OptionalSet& optional, const Resolution& s,
                       bool include_root_edges) {
    BuildGraph g;
    g.vertices = s.selected;
    auto add = [&](const Dependency& d) {
        if (!s.contains(d.from)) return;
        if (!include_root_edges && d.from == inst.root) return;
        for (const auto& v : d.versions) {
            Package dep{d.on, v};
            if (s.contains(dep)) g.edges.insert({d.from, dep});
        }
    };
    for (const auto& d : inst.deps) add(d);
    for (const auto& d : optional) add(d);
    return g;
}

std::variant<std::vector<Package>, CycleReport> topo_order(const BuildGraph& g) {
    // Emit a package once all its dependees are emitted, smallest first.
    std::map<Package, std::size_t, PackageLess> pending;  // unemitted dependees
    std::map<Package, std::vector<Package>, PackageLess> dependers;
    for (const auto& v : g.vertices) pending[v] = 0;
    for (const auto& e : g.edges) {
        ++pending[e.depender];
        dependers[e.dependee].push_back(e.depender);
    }

    PackageSet ready;
    for (const auto& [p, n] : pending)
        if (n == 0) ready.insert(p);

    std::vector<Package> order;
    while (!ready.empty()) {
        Package p = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(p);
        for (const auto& q : dependers[p])
            if (--pending.at(q) == 0) ready.insert(q);
    }
    if (order.size() == g.vertices.size()) return order;

    // A cycle remains: report a shortest one, from the smallest entry point.
    PackageSet remaining;
    for (const auto& [p, n] : pending)
        if (n > 0) remaining.insert(p);
    std::map<Package, std::vector<Package>, PackageLess> next;
    for (const auto& e : g.edges)
        if (remaining.count(e.depender) && remaining.count(e.dependee))
            next[e.depender].push_back(e.dependee);

    std::vector<Package> best;
    for (const auto& start : remaining) {
        std::map<Package, Package, PackageLess> parent;
        std::queue<Package> q;
        q.push(start);
        PackageSet seen{start};
        bool closed = false;
        while (!q.empty() && !closed) {
            Package cur = q.front();
            q.pop();
            for (const auto& to : next[cur]) {
                if (to == start) {
                    std::vector<Package> cyc{start};
                    for (Package at = cur; !(at == start); at = parent.at(at))
                        cyc.push_back(at);
                    std::reverse(cyc.begin() + 1, cyc.end());
                    if (best.empty() || cyc.size() < best.size()) best = cyc;
                    closed = true;
                    break;
                }
                if (seen.insert(to).second) {
                    parent.emplace(to, cur);
                    q.push(to);
                }
            }
        }
    }
    return CycleReport{best};
}

std::string to_dot(const BuildGraph& g) {
    std::string out = "digraph build {\n";
    auto label = [](const Package& p) { return to_string(p.name) + " " + to_string(p.version); };
    for (const auto& v : g.vertices) out += "  \"" + label(v) + "\";\n";
    for (const auto& e : g.edges)
        out += "  \"" + label(e.depender) + "\" -> \"" + label(e.dependee) + "\";\n";
    out += "}\n";
    return out;
}

}  // namespace pkgcalc
