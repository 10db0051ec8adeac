#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "idlearn/admg.hpp"
#include "idlearn/estimand.hpp"
#include "idlearn/identify.hpp"
#include "idlearn/learn.hpp"
#include "idlearn/samples.hpp"
#include "idlearn/scm_oracle.hpp"
#include "idlearn/verify.hpp"

namespace idlearn {

using Json = nlohmann::json;

/// Serializes with every floating-point number at 17 significant digits.
std::string dump(const Json& j, int indent = 2);

/// Throws Error(parse_error) on unreadable files or malformed JSON.
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);

// {"vars":[{"name","cardinality"}], "directed":[[p,c]], "bidirected":[[a,b]]}
Admg admg_from_json(const Json& j);
Json to_json(const Admg& g);

// {"nodes":[{"name","cardinality","hidden","parents":[names],"cpt":nested}]}
CausalBayesNet net_from_json(const Json& j);
Json to_json(const CausalBayesNet& net);

struct QuerySpec {
  Assignment x;
  VarSet y;
};

// {"intervene":[{"var","value"}], "targets":[names]}; missing targets mean V \ X.
QuerySpec query_from_json(const Json& j, const Admg& g);
Json to_json(const QuerySpec& q, const Admg& g);

Json to_json(const DistExpr& e, const Admg& g);
ExprPtr expr_from_json(const Json& j, const Admg& g);

Json to_json(const Estimand& est);
Estimand estimand_from_json(const Json& j);

Json to_json(const HedgeWitness& h, const Admg& g);
Json to_json(const std::vector<TraceEntry>& trace);

Json to_json(const PmfTable& t, const Admg& g);

Json to_json(const LearnedInterventional& li);
LearnedInterventional learned_from_json(const Json& j);

Json to_json(const OracleReport& r, const Admg& g);

/// Header row of names, then one row of symbol indices per sample. Columns
/// may appear in any order; every graph variable must be present.
SampleSet samples_from_csv(std::istream& in, const Admg& g);
void samples_to_csv(std::ostream& out, const SampleSet& s, const std::vector<std::string>& names);

}  // namespace idlearn
