#pragma once

#include <string>
#include <vector>

namespace bcnet::claims {

// One implemented claim: a stable anchor slug, the operation that carries
// it, the test or experiment that checks it, and how it is verified.
// Status is one of verified-deterministic, verified-statistical,
// out-of-scope.
struct ClaimRow {
  std::string anchor;
  std::string operation;
  std::string test;
  std::string status;
};

// In-source registry, the authority the documentation table must match.
const std::vector<ClaimRow>& claim_registry();

// Renders the registry in the documentation table format.
std::string render_mapping_tsv();

struct MappingCheck {
  bool ok = false;
  std::vector<std::string> missing;     // in registry, absent from the table
  std::vector<std::string> extra;       // in the table, absent from registry
  std::vector<std::string> mismatched;  // same anchor, different row content
  std::vector<std::string> malformed;   // unparsable or duplicate table lines
};

// Compares the registry against the checked-in table, both directions.
MappingCheck check_mapping(const std::string& tsv_path);

}  // namespace bcnet::claims
