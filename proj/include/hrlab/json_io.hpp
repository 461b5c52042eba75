#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hrlab/choquet.hpp"
#include "hrlab/convergence.hpp"
#include "hrlab/exponents.hpp"
#include "hrlab/inequalities.hpp"
#include "hrlab/povm.hpp"

namespace hrlab {

// Reports must come out byte-identical for identical inputs, so everything
// goes through ordered_json: field order is insertion order, never a hash.
using Json = nlohmann::ordered_json;

// Scalars and geometry. Complex numbers serialize as {"re","im"}, exact
// points as {"modulus","turn"} with the turn kept as the string "a/b" so the
// rational survives the trip bit-exactly. Matrices are row-major arrays.
Json json_of(Complex z);
Complex complex_from(const Json& j);

Json json_of(const Turn& t);
Turn turn_from(const Json& j);

Json json_of(const ExactPoint& p);
ExactPoint point_from(const Json& j);

Json json_of(const ComplexMatrix& a);
ComplexMatrix matrix_from(const Json& j);

Json json_of(const PointSet& xs);
PointSet points_from(const Json& j);

Json json_of(const ExponentSet& xs);
ExponentSet exponents_from(const Json& j);

Json json_of(const AtomicMeasure& mu);
AtomicMeasure measure_from(const Json& j);

Json json_of(const Povm& f);
Povm povm_from(const Json& j);

// Report serialization, one function per result struct.
Json json_of(const SigmaTriple& s);
Json json_of(const HyperrigidVerdict& v);
Json json_of(const BoundaryResult& r);
Json json_of(const RepresentingReport& r);
Json json_of(const IsnytosInstance& inst);
Json json_of(const Dilation& d);
Json json_of(const ConvergenceReport& r);
Json json_of(const Main2Report& r);
Json json_of(const HansenReport& r);
Json json_of(const LiebRuskaiReport& r);
Json json_of(const CommutationVerdict& v);
Json json_of(const Main1Report& r);
Json json_of(const ScalarSearchResult& r);
Json json_of(const PovmSearchResult& r);

// Strict field access; missing or mistyped fields raise ParseError naming
// the offending key.
const Json& member(const Json& j, const char* key);
double number_from(const Json& j, const std::string& who);
int integer_from(const Json& j, const std::string& who);

// CSV renderings for the two table-shaped commands. Numbers use the same
// shortest-round-trip formatting as the JSON writer.
std::string choquet_csv(const PointSet& lambdas, const std::vector<BoundaryResult>& rows);
std::string converge_csv(const ConvergenceReport& r);

} // namespace hrlab
