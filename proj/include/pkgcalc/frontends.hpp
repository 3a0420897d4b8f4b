#pragma once

#include <map>
#include <string>

#include "pkgcalc/pipeline.hpp"

// Document frontends: the canonical JSON interchange format, the
// Debian-control and Cargo-manifest subsets, and the cross-ecosystem
// translation driver.

namespace pkgcalc {

// Canonical JSON interchange. parse rejects unknown fields; emit is
// canonical (sorted keys, sorted collections), so emit∘parse∘emit = emit.
ExtendedInstance parse_repo(const std::string& text);
std::string emit_repo(const ExtendedInstance& inst);

// The canonical rule-satisfying stack for the relations an instance holds.
ExtensionStack infer_stack(const ExtendedInstance& inst);

// Debian-control subset: Package/Version/Depends/Conflicts/Provides plus a
// Query pseudo-paragraph. Operators (= v), (>= v), (<= v), (<< v), (>> v);
// `|` alternation becomes a package formula; unversioned Provides is a
// wildcard. Unknown fields are hard errors.
ExtendedInstance parse_debctl(const std::string& text);
std::string emit_debctl(const ExtendedInstance& inst);

// Cargo-manifest subset: [package] name/version, [dependencies] requirement
// strings or inline tables with features/optional, [features] tables with
// dep: entries, and a [query] section. Major-version granularity is implied.
ExtendedInstance parse_cargotoml(const std::string& text);
std::string emit_cargotoml(const ExtendedInstance& inst);

enum class Dialect { Json, Debian, Cargo };

// parse -> lower the extensions the target cannot express -> emit. Versions
// are renumbered where the target's implicit semantics require it and
// synthetic package names become plain atoms.
std::string translate(const std::string& text, Dialect from, Dialect to);

// translate plus the package mapping it applied: every package of the
// lowered source instance and what it was emitted as.
struct Translation {
    std::string text;
    std::map<Package, Package, PackageLess> renames;
};

Translation translate_detailed(const std::string& text, Dialect from, Dialect to);

// Resolution documents (JSON) for the CLI.
std::string emit_resolution(const ExtendedResolution& r);

}  // namespace pkgcalc
