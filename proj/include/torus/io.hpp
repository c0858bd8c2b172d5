#pragma once

#include <string>

#include "json.hpp"
#include "torus/characterizer.hpp"
#include "torus/charset.hpp"
#include "torus/fsigma.hpp"
#include "torus/verifier.hpp"

namespace torus {

// Insertion-ordered JSON so every emitter is byte-stable.
using Json = nlohmann::ordered_json;

// Text forms. Rationals print as "p" or "p/q". Quadratics print as
// "sqrt(D):a,b,c" meaning (a + b*sqrt(D))/c. Frozen enclosures print as
// "[lo,hi]@bits" with dyadic-rational endpoints.
std::string rat_to_string(const Rat& r);
Rat parse_rat(const std::string& s);
std::string real_to_string(const Real& x);
Real parse_real(const std::string& s);

// Characters print as "(a,b,...)"; parsing also accepts a bare integer for
// one dimension. Points print bare in one dimension, "(x1,...,xd)" above.
std::string char_to_string(const Character& c);
Character parse_character(const std::string& s);
std::string point_to_string(const TorusPoint& p);
TorusPoint parse_point(const std::string& s);

// Integers become JSON numbers up to 53 bits of magnitude and decimal
// strings beyond, so consumers without bignums keep exact values.
Json int_to_json(const Int& v);
Int json_to_int(const Json& j);

Json point_to_json(const TorusPoint& p);
TorusPoint point_from_json(const Json& j);
Json char_to_json(const Character& c);
Character char_from_json(const Json& j);
Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

// {"levels":[[...]],"dim":d}; level entries are bare integers in one
// dimension and coefficient arrays above.
Json charset_to_json(const CharSet& b);
CharSet charset_from_json(const Json& j);

// Towers round-trip through {"kind","dim","metric",...}; a bare
// {"stages":[[points]]} object is accepted as an explicit tower.
Json tower_to_json(const Tower& t);
Tower tower_from_json(const Json& j);

Json certificate_to_json(const CoveringCertificate& c);
CoveringCertificate certificate_from_json(const Json& j);

Json chain_to_json(const ChainSpec& c);
ChainSpec chain_from_json(const Json& j);
Json witness_to_json(const RefutationWitness& w);
RefutationWitness witness_from_json(const Json& j);

Json profile_to_json(const TailProfile& p);
// Rows of "level,phi,value,err" with decimal values; the JSON form keeps
// the exact data.
std::string profile_to_csv(const TailProfile& p);

Json measure_report_to_json(const MeasureReport& r);
Json mc_to_json(const MonteCarloEstimate& e);
Json separation_to_json(const std::vector<SeparationStep>& steps);
Json chain_steps_to_json(const std::vector<ChainStep>& steps);
Json condition_c_to_json(const ConditionC& c);
Json partition_to_json(const BPartition& p);
Json characterization_to_json(const Characterization& c);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace torus
