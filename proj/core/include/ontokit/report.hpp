#pragma once

// JSON and CSV views of analysis results. Reals are rounded to 12
// significant digits so that reports are byte-stable across platforms.

#include <string>

#include <nlohmann/json.hpp>

#include "ontokit/classify.hpp"
#include "ontokit/epi_bound.hpp"
#include "ontokit/ks_valuation.hpp"

namespace ontokit {

using Json = nlohmann::ordered_json;

double round_sig(double x, int digits = 12);

Json to_json(const PureState& s);
Json to_json(const Witness& w);
Json to_json(const PredicateResult& r);
Json to_json(const ClassificationReport& r);
Json to_json(const BornReport& r);
Json to_json(const MaxEpistemicReport& r);
Json to_json(const PrepDistance& d);
Json to_json(const KsOmReport& r);
Json to_json(const TableReport& r);
Json to_json(const OrthogonalityGraph& g);
Json to_json(const ValuationResult& r, const OrthogonalityGraph& g);
Json to_json(const InfeasibilityCertificate& c);
Json to_json(const FeasibilityResult& r);
Json to_json(const OverlapBound& b);

/// name,type,reciprocity,determinism,contextual
std::string table_csv(const TableReport& r);
std::string table_text(const TableReport& r);

}  // namespace ontokit
