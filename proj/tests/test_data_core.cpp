#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pklm/csv.hpp"
#include "pklm/errors.hpp"
#include "pklm/missingness.hpp"
#include "pklm/rng.hpp"
#include "pklm/synth.hpp"

using namespace pklm;

namespace {

// five-column rows mirroring the worked projection example:
// x = (NA, 1, NA, 2, 4), y = (NA, NA, NA, 1, 3)
DataMatrix example_xy() {
  DataMatrix data(2, 5);
  data.set(0, 1, 1.0);
  data.set(0, 3, 2.0);
  data.set(0, 4, 4.0);
  data.set(1, 3, 1.0);
  data.set(1, 4, 3.0);
  return data;
}

}  // namespace

TEST_CASE("build_mask marks exactly the absent cells") {
  DataMatrix data = example_xy();
  MissingnessMask mask = build_mask(data);
  std::uint8_t expected0[5] = {1, 0, 1, 0, 0};
  std::uint8_t expected1[5] = {1, 1, 1, 0, 0};
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(mask.bit(0, j) == expected0[j]);
    CHECK(mask.bit(1, j) == expected1[j]);
  }
}

TEST_CASE("build_mask on a fully observed row is all zero") {
  DataMatrix data(1, 3);
  for (std::size_t j = 0; j < 3; ++j) data.set(0, j, 1.0 * static_cast<double>(j));
  MissingnessMask mask = build_mask(data);
  for (std::size_t j = 0; j < 3; ++j) CHECK(mask.bit(0, j) == 0);
}

TEST_CASE("build_mask rejects an all-missing row") {
  DataMatrix data(2, 2);
  data.set(0, 0, 1.0);
  data.set(0, 1, 2.0);
  CHECK_THROWS_AS(build_mask(data), AllMissingRow);
  try {
    build_mask(data);
  } catch (const AllMissingRow& e) {
    CHECK(e.row() == 1);
  }
}

TEST_CASE("build_mask rejects empty data") {
  DataMatrix data(0, 3);
  CHECK_THROWS_AS(build_mask(data), EmptyData);
}

TEST_CASE("extract_patterns groups rows by mask row") {
  MissingnessMask mask(4, 2);
  mask.set_bit(0, 0, 1);
  mask.set_bit(1, 1, 1);
  mask.set_bit(3, 0, 1);
  // rows: (1,0), (0,1), (0,0), (1,0)
  PatternCatalog catalog = extract_patterns(mask);
  REQUIRE(catalog.n_patterns() == 3);
  CHECK(catalog.group_sizes[0] == 2);
  CHECK(catalog.group_sizes[1] == 1);
  CHECK(catalog.group_sizes[2] == 1);
  CHECK(catalog.row_to_pattern[0] == 0);
  CHECK(catalog.row_to_pattern[1] == 1);
  CHECK(catalog.row_to_pattern[2] == 2);
  CHECK(catalog.row_to_pattern[3] == 0);
  std::size_t total = 0;
  for (auto s : catalog.group_sizes) total += s;
  CHECK(total == mask.n_rows());
}

TEST_CASE("extract_patterns on an all-zero mask finds one group") {
  MissingnessMask mask(7, 3);
  PatternCatalog catalog = extract_patterns(mask);
  REQUIRE(catalog.n_patterns() == 1);
  CHECK(catalog.group_sizes[0] == 7);
}

TEST_CASE("every row distinct gives as many patterns as rows") {
  MissingnessMask mask(4, 5);
  mask.set_bit(0, 0, 1);
  mask.set_bit(0, 2, 1);
  mask.set_bit(1, 0, 1);
  mask.set_bit(1, 1, 1);
  mask.set_bit(1, 2, 1);
  mask.set_bit(2, 1, 1);
  PatternCatalog catalog = extract_patterns(mask);
  CHECK(catalog.n_patterns() == 4);
}

TEST_CASE("extract_patterns is permutation-covariant") {
  Rng rng(11);
  SimSpec spec{1, 60, 4, 0.5, Mechanism::mcar, 17};
  DataMatrix data = simulate(spec);
  MissingnessMask mask = build_mask(data);
  PatternCatalog base = extract_patterns(mask);

  std::vector<std::uint32_t> perm(mask.n_rows());
  std::iota(perm.begin(), perm.end(), 0u);
  rng.shuffle(perm);
  MissingnessMask shuffled = permute_rows(mask, perm);
  PatternCatalog moved = extract_patterns(shuffled);

  CHECK(moved.n_patterns() == base.n_patterns());
  // pattern ids may be renumbered by first occurrence, but each row keeps
  // its group and the multiset of group sizes is preserved
  for (std::size_t i = 0; i < perm.size(); ++i) {
    CHECK(moved.patterns[moved.row_to_pattern[i]] == base.patterns[base.row_to_pattern[perm[i]]]);
  }
  auto a = base.group_sizes, b = moved.group_sizes;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("csv parses numbers, missing tokens, and types") {
  std::istringstream in("a,b\n1,NA\n2,3\n");
  DataMatrix data = load_csv(in);
  REQUIRE(data.n_rows() == 2);
  REQUIRE(data.n_cols() == 2);
  CHECK(data.column_name(0) == "a");
  CHECK(data.column_kind(0) == ColumnKind::numeric);
  CHECK(data.value(0, 0) == 1.0);
  CHECK(data.is_missing(0, 1));
  CHECK(data.value(1, 1) == 3.0);
}

TEST_CASE("a non-numeric token makes the whole column categorical") {
  std::istringstream in("u,v\nx,1\ny,2\nNA,3\nx,4\n");
  DataMatrix data = load_csv(in);
  CHECK(data.column_kind(0) == ColumnKind::categorical);
  CHECK(data.column_kind(1) == ColumnKind::numeric);
  CHECK(data.is_missing(2, 0));
  CHECK(data.value(0, 0) == data.value(3, 0));  // both "x"
  CHECK(data.value(0, 0) != data.value(1, 0));
  CHECK(data.categories(0).size() == 2);
}

TEST_CASE("ragged records are rejected") {
  std::istringstream in("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(load_csv(in), RaggedRow);
}

TEST_CASE("empty input is rejected") {
  std::istringstream header_only("a,b\n");
  CHECK_THROWS_AS(load_csv(header_only), EmptyData);
}

TEST_CASE("csv respects custom delimiter and missing tokens") {
  std::istringstream in("a;b\n1;?\n2;3\n");
  CsvOptions opts;
  opts.delimiter = ';';
  opts.missing_tokens = {"?"};
  DataMatrix data = load_csv(in, opts);
  CHECK(data.is_missing(0, 1));
  CHECK(data.value(1, 1) == 3.0);
}

TEST_CASE("drop_all_missing_rows removes instead of erroring") {
  std::istringstream in("a,b\nNA,NA\n1,2\n");
  CsvOptions opts;
  opts.drop_all_missing_rows = true;
  std::size_t dropped = 0;
  DataMatrix data = load_csv(in, opts, &dropped);
  CHECK(dropped == 1);
  CHECK(data.n_rows() == 1);
  CHECK_NOTHROW(build_mask(data));

  std::istringstream in2("a,b\nNA,NA\n1,2\n");
  CHECK_THROWS_AS(build_mask(load_csv(in2)), AllMissingRow);
}

TEST_CASE("csv round-trip reproduces the mask bit for bit") {
  SimSpec spec{2, 80, 5, 0.5, Mechanism::mcar, 99};
  DataMatrix data = simulate(spec);
  MissingnessMask before = build_mask(data);

  std::ostringstream out;
  write_csv(data, out);
  std::istringstream in(out.str());
  DataMatrix reloaded = load_csv(in);
  REQUIRE(reloaded.n_rows() == data.n_rows());
  REQUIRE(reloaded.n_cols() == data.n_cols());
  CHECK(build_mask(reloaded) == before);
  // and the numeric payload survives round-trip precision
  for (std::size_t i = 0; i < data.n_rows(); ++i)
    for (std::size_t j = 0; j < data.n_cols(); ++j)
      if (data.is_present(i, j)) CHECK(reloaded.value(i, j) == data.value(i, j));
}

TEST_CASE("categorical data round-trips through csv") {
  DataMatrix data(3, 2);
  data.set_column_kind(0, ColumnKind::categorical);
  data.set(0, 0, static_cast<double>(data.intern_category(0, "red")));
  data.set(1, 0, static_cast<double>(data.intern_category(0, "blue")));
  data.set_missing(2, 0);
  data.set(2, 0, 0);
  data.set_missing(2, 0);
  data.set(0, 1, 1.5);
  data.set(1, 1, -2.0);
  data.set(2, 1, 0.25);

  std::ostringstream out;
  write_csv(data, out);
  std::istringstream in(out.str());
  DataMatrix reloaded = load_csv(in);
  CHECK(reloaded.column_kind(0) == ColumnKind::categorical);
  CHECK(reloaded.categories(0) == data.categories(0));
  CHECK(reloaded.is_missing(2, 0));
  CHECK(build_mask(reloaded) == build_mask(data));
}
