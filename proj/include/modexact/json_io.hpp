#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "modexact/hulls.hpp"

namespace modexact {

using json = nlohmann::json;

/* Serialization conventions, shared by every subcommand and test:
   - matrices are row-major nested arrays of decimal integer strings, so
     entries survive any magnitude and any JSON parser bit-exactly;
   - a module is its invariant-factor list as plain numbers (factors are
     bounded by the ring modulus, which fits in 64 bits by construction);
   - the ring is the decimal string of its modulus ("0" for Z);
   - counts and orders are numbers, with the string "saturated" standing in
     once an enumeration size exceeds the 64-bit range. */

json to_json(const Ring& r);
json to_json(const Mat& a);
json to_json(const IntMatrix& a);
json to_json(const FpModule& m);
json to_json(const Morphism& f);          /* source/target as factor lists */
json to_json(const Conflation& c);
json to_json(const ExactStructureSelector& sel);
json to_json(const PurityCertificate& c);
json to_json(const PartialVerdict& v);
json to_json(const CophantomVerdict& v);
json to_json(const Battery& b);
json to_json(const InflationSet& h);
json to_json(const SmallVerdict& v);
json to_json(const Hull& h);
json to_json(const PreenvelopeTrace& t);
json to_json(const HullReport& r);
json caps_to_json();
json count_to_json(long long saturating_count);

Ring ring_from_json(const json& j);
Mat mat_from_json(const json& j);
IntMatrix intmatrix_from_json(const json& j);
FpModule module_from_json(const Ring& ring, const json& j);
Morphism morphism_from_json(const Ring& ring, const json& j);
Conflation conflation_from_json(const Ring& ring, const json& j);
ExactStructureSelector selector_from_json(const Ring& ring, const json& j);
Battery battery_from_json(const Ring& ring, const json& j);
InflationSet inflation_set_from_json(const Ring& ring, const json& j);

/* A named object store loaded from one JSON document. Morphism sources and
   targets are module names; conflations and inflation sets reference
   morphism names; everything resolves and validates at load time, so a
   Workspace in memory only holds checked semantic objects. Unknown keys in
   the document are ignored. */
struct Workspace {
    Ring ring = Ring::integers();
    std::map<std::string, FpModule> modules;
    std::map<std::string, Morphism> morphisms;
    std::map<std::string, Conflation> conflations;
    std::map<std::string, Battery> batteries;
    std::map<std::string, InflationSet> inflation_sets;
    json meta; /* echoed verbatim when present */

    const FpModule& module_named(const std::string& name) const;
    const Morphism& morphism_named(const std::string& name) const;
    const Conflation& conflation_named(const std::string& name) const;
    const Battery& battery_named(const std::string& name) const;
    const InflationSet& inflation_set_named(const std::string& name) const;
};

Workspace workspace_from_json(const json& j);
json to_json(const Workspace& ws);
Workspace load_workspace(const std::string& path);

/* canonical text form: sorted keys, two-space indent, trailing newline */
std::string dump_json(const json& j);

}  // namespace modexact
