#pragma once

#include <string>

#include "cantorsum/density.hpp"
#include "cantorsum/search.hpp"

namespace cantorsum {

// IFS config schema (JSON):
//   { "hull": "p/q", "ratio": "p/q" | "alpha p/q", "offsets": ["p/q", ...],
//     "labels": [...] }
// The alpha form denotes the middle-alpha set C_a and may omit hull/offsets.
// parse(serialize(ifs)) == ifs exactly, and serialization is canonical.
HomogeneousIFS parse_ifs_config(const std::string& text);
std::string serialize_ifs_config(const HomogeneousIFS& ifs);

HomogeneousIFS load_ifs_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::string serialize_interval_union(const IntervalUnion& u);
IntervalUnion parse_interval_union(const std::string& text);

std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

// CSV: decimal columns at the given precision plus exact p/q columns.
std::string histogram_csv(const DensityHistogram& h, int decimals = 6);

}  // namespace cantorsum
