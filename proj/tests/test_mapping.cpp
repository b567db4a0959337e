#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bcnet/claims.hpp"
#include "doctest.h"

using namespace bcnet::claims;

namespace {

const std::string kTablePath = std::string(BCNET_SOURCE_DIR) +
                               "/docs/claims.tsv";

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string write_temp(const std::vector<std::string>& lines,
                       const std::string& tag) {
  const std::string path = "mapping_" + tag + ".tsv";
  std::ofstream out(path);
  for (const std::string& l : lines) out << l << "\n";
  return path;
}

}  // namespace

TEST_CASE("registry rows are well formed and unique") {
  const std::vector<ClaimRow>& rows = claim_registry();
  CHECK(rows.size() >= 30);
  std::set<std::string> anchors;
  const std::set<std::string> statuses{"verified-deterministic",
                                       "verified-statistical", "out-of-scope"};
  for (const ClaimRow& r : rows) {
    CHECK(anchors.insert(r.anchor).second);
    CHECK(!r.anchor.empty());
    CHECK(statuses.count(r.status) == 1);
    if (r.status == "out-of-scope") {
      CHECK(r.operation == "-");
    } else {
      CHECK(!r.operation.empty());
      CHECK(!r.test.empty());
    }
  }
  // The deliberately unimplemented topics stay visible in the registry.
  CHECK(anchors.count("net-topology-convergence") == 1);
  CHECK(anchors.count("net-uniqueness-characterizations") == 1);
  CHECK(anchors.count("sticky-set-perfectness") == 1);
}

TEST_CASE("rendered table round-trips through the checker") {
  const std::string rendered = render_mapping_tsv();
  std::istringstream in(rendered);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "anchor\toperation\ttest\tstatus");
  std::size_t data_rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == claim_registry().size());
}

TEST_CASE("checked-in table matches the registry") {
  const MappingCheck mc = check_mapping(kTablePath);
  CHECK(mc.ok);
  CHECK(mc.missing.empty());
  CHECK(mc.extra.empty());
  CHECK(mc.mismatched.empty());
  CHECK(mc.malformed.empty());
}

TEST_CASE("checker flags a dropped row") {
  std::vector<std::string> lines = read_lines(kTablePath);
  REQUIRE(lines.size() >= 3);
  lines.pop_back();
  const std::string path = write_temp(lines, "dropped");
  const MappingCheck mc = check_mapping(path);
  CHECK(!mc.ok);
  CHECK(mc.missing.size() == 1);
  CHECK(mc.extra.empty());
  std::remove(path.c_str());
}

TEST_CASE("checker flags a foreign row") {
  std::vector<std::string> lines = read_lines(kTablePath);
  lines.push_back("made-up-anchor\tsome_op\tsome_test\tverified-deterministic");
  const std::string path = write_temp(lines, "foreign");
  const MappingCheck mc = check_mapping(path);
  CHECK(!mc.ok);
  CHECK(mc.extra.size() == 1);
  CHECK(mc.extra[0].find("made-up-anchor") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("checker flags an edited field") {
  std::vector<std::string> lines = read_lines(kTablePath);
  REQUIRE(lines.size() >= 2);
  std::string& row = lines[1];
  const std::size_t last_tab = row.rfind('\t');
  REQUIRE(last_tab != std::string::npos);
  row = row.substr(0, last_tab) + "\tverified-by-wishful-thinking";
  const std::string path = write_temp(lines, "edited");
  const MappingCheck mc = check_mapping(path);
  CHECK(!mc.ok);
  CHECK(mc.mismatched.size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("checker flags duplicates, bad headers, and unreadable paths") {
  std::vector<std::string> lines = read_lines(kTablePath);
  lines.push_back(lines[1]);
  const std::string dup_path = write_temp(lines, "dup");
  const MappingCheck dup = check_mapping(dup_path);
  CHECK(!dup.ok);
  REQUIRE(dup.malformed.size() == 1);
  CHECK(dup.malformed[0].find("duplicate") != std::string::npos);
  std::remove(dup_path.c_str());

  std::vector<std::string> bad = read_lines(kTablePath);
  bad[0] = "anchor,operation,test,status";
  const std::string bad_path = write_temp(bad, "header");
  const MappingCheck hdr = check_mapping(bad_path);
  CHECK(!hdr.ok);
  REQUIRE(!hdr.malformed.empty());
  CHECK(hdr.malformed[0].find("bad header") != std::string::npos);
  std::remove(bad_path.c_str());

  const MappingCheck gone = check_mapping("no_such_file.tsv");
  CHECK(!gone.ok);
  REQUIRE(!gone.malformed.empty());
  CHECK(gone.malformed[0].find("cannot open") != std::string::npos);
}
