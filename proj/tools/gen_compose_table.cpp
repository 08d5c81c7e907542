// Regenerates src/compose_table.inc by enumerating every triple of intervals
// with integer endpoints in [0, 8]. Six endpoints realize every ordering, so
// this range is exhaustive.

#include <cstdint>
#include <cstdio>
#include <vector>

#include "tilr/interval_algebra.hpp"

int main() {
  using namespace tilr;
  constexpr Tick kMax = 8;
  std::vector<Interval> all;
  for (Tick s = 0; s <= kMax; ++s)
    for (Tick e = s; e <= kMax; ++e) all.push_back({s, e});

  std::uint16_t table[kNumBaseRelations][kNumBaseRelations] = {};
  for (const auto& a : all)
    for (const auto& b : all) {
      const int ab = index_of(classify(a, b));
      for (const auto& c : all) {
        table[ab][index_of(classify(b, c))] |= static_cast<std::uint16_t>(1u << index_of(classify(a, c)));
      }
    }

  std::printf("// Generated by tools/gen_compose_table.cpp. Do not edit.\n");
  std::printf("// Row r1, column r2, bit r set iff some A,B,C has A r1 B, B r2 C, A r C.\n");
  std::printf("#pragma once\n\n#include <cstdint>\n\nnamespace tilr::detail {\n\n");
  std::printf("inline constexpr std::uint16_t kComposeTable[13][13] = {\n");
  for (int i = 0; i < kNumBaseRelations; ++i) {
    std::printf("    {");
    for (int j = 0; j < kNumBaseRelations; ++j) {
      std::printf("0x%04x%s", table[i][j], j + 1 < kNumBaseRelations ? ", " : "");
    }
    std::printf("},  // %s\n", relation_name(static_cast<BaseRelation>(i)).data());
  }
  std::printf("};\n\n}  // namespace tilr::detail\n");
  return 0;
}
