#pragma once
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "minper/spectral.hpp"
#include "minper/verify.hpp"

namespace minper {

using njson = nlohmann::json;

// Parse or die with ParseError; all object parsing is strict: unknown keys
// are rejected so a typo in a tolerance name cannot silently pass.
njson parse_json(const std::string& text);
njson load_json_file(const std::string& path);

struct ParsedVector {
    Storage data;
    Scalar field = Scalar::Real; // Complex as soon as any [re, im] entry appears
};

// Array of numbers and/or [re, im] pairs.
ParsedVector parse_vector(const njson& j);

// Array of rows; complex entries as [re, im].
Matrix parse_matrix(const njson& j);

// {"kind":"lp","p":2} | {"kind":"linf"} | {"kind":"weighted","weights":[...]}
VectorNorm parse_norm(const njson& j);

struct ParsedSystem {
    LinearSystem system;
    std::optional<Storage> x0; // optional embedded start state ("matrix" type)
};

// {"type":"planar","L":..} | {"type":"matrix","A":..,"norm":..[,"x0":..]} |
// {"type":"complex_diagonal","L":..,"n":..,"c":[[re,im],..]} |
// {"type":"random_antisym"|"random_antiherm","n":..,"scale":..,"seed":..}
ParsedSystem parse_system(const njson& j);

EnsembleSpec parse_ensemble(const njson& j);

// {"lo": vector, "hi": vector} with parse_vector semantics.
Box parse_box(const njson& j, std::size_t dim);

// All emitters print doubles with %.17g so reruns are byte-identical.
std::string g17(double v);

std::string system_spec_json(const Matrix& a, const VectorNorm& norm, const Storage& x0);
std::string induced_json(const InducedNormResult& r);
std::string spectral_json(const SpectralInfo& s);
std::string attainment_json(const AttainmentResult& a);
std::string period_json(const PeriodEstimate& p);
std::string bound_report_json(const BoundReport& rep);
std::string search_summary_json(const SearchSummary& sum);
std::string lemma1_json(const Lemma1Report& r, const ShiftedDifference& sd, bool asserted);
std::string wirtinger_json(const WirtingerReport& r, const ShiftedDifference& sd,
                           bool asserted);
std::string lipschitz_json(const LipschitzEstimate& est,
                           std::optional<double> induced_value);

// Header draw_index,k,T,L,margin; successful draws only.
void draws_csv(const std::vector<DrawRecord>& draws, std::ostream& out);

} // namespace minper
