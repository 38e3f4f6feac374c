#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "greyshot/dataset.hpp"
#include "greyshot/synthetic.hpp"

using namespace greyshot;
using namespace greyshot::data;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("greyshot_test_" + name);
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("movielens loader") {
  const auto one = load_movielens(write_temp("ml1.dat", "1::10::5::978300760\n"));
  CHECK(one.m == 1);
  CHECK(one.n == 1);
  REQUIRE(one.size() == 1);
  CHECK(one.triplets[0] == Rating{0, 0, 5.0});
  CHECK(one.rating_min == 1.0);
  CHECK(one.rating_max == 5.0);

  const auto ds = load_movielens(
      write_temp("ml3.dat", "7::100::3::1\n9::100::4::2\n7::55::1::3\n"));
  CHECK(ds.m == 2);
  CHECK(ds.n == 2);
  CHECK(ds.triplets[2] == Rating{0, 1, 1.0});
  CHECK(ds.users->original(1) == "9");
  CHECK(ds.items->find("55") == std::optional<std::size_t>{1});

  try {
    load_movielens(write_temp("mlbad.dat", "1::10::5\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_movielens(write_temp("mlbad2.dat", "1::2::3::4\n1::x::y::4\n")), ParseError);
  CHECK_THROWS_AS(load_movielens(write_temp("mlempty.dat", "")), std::runtime_error);
  CHECK_THROWS_AS(load_movielens("/nonexistent/ratings.dat"), std::runtime_error);
}

TEST_CASE("delimited loader") {
  const auto dup = load_delimited(write_temp("d1.csv", "u1,i1,4\nu1,i1,2\n"));
  CHECK(dup.size() == 2);
  CHECK(dup.m == 1);
  CHECK(dup.rating_min == 2.0);
  CHECK(dup.rating_max == 4.0);

  DelimitedOptions header;
  header.skip_header = true;
  CHECK(load_delimited(write_temp("d2.csv", "user,item,rating\na,b,3\n"), header).size() == 1);

  DelimitedOptions cols;
  cols.delimiter = '\t';
  cols.user_col = 2;
  cols.item_col = 0;
  cols.rating_col = 1;
  cols.rating_min = 1;
  cols.rating_max = 5;
  const auto tab = load_delimited(write_temp("d3.tsv", "item9\t4\tuserA\textra\n"), cols);
  CHECK(tab.users->original(0) == "userA");
  CHECK(tab.items->original(0) == "item9");
  CHECK(tab.rating_min == 1.0);

  try {
    load_delimited(write_temp("d4.csv", "a,b,3\na,b\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_delimited(write_temp("d5.csv", "a,b,good\n")), ParseError);
  DelimitedOptions same;
  same.item_col = 0;
  CHECK_THROWS_AS(load_delimited(write_temp("d6.csv", "a,b,3\n"), same), std::invalid_argument);
}

TEST_CASE("loading is deterministic and survives a write/reload roundtrip") {
  const auto src = generate_synthetic({.users = 40, .items = 60, .ratings = 500, .seed = 4});
  const auto path = std::filesystem::temp_directory_path() / "greyshot_test_rt.csv";
  write_delimited(src, path);
  DelimitedOptions opt;
  opt.rating_min = 1;
  opt.rating_max = 5;
  const auto first = load_delimited(path, opt);
  CHECK(first == load_delimited(path, opt));
  const auto path2 = std::filesystem::temp_directory_path() / "greyshot_test_rt2.csv";
  write_delimited(first, path2);
  CHECK(load_delimited(path2, opt) == first);
}

TEST_CASE("split partitions exactly") {
  std::vector<Rating> t;
  for (std::size_t k = 0; k < 10; ++k) t.push_back({k % 3, k, static_cast<double>(1 + k % 5)});
  const auto ds = from_triplets(t, 3, 10, 1, 5);
  const auto s = split(ds, {0.2, 9});
  CHECK(s.test.size() == 2);
  CHECK(s.train.size() == 8);
  CHECK(s.train.m == 3);
  CHECK(s.test.n == 10);
  CHECK(s.train.users == ds.users);

  const auto again = split(ds, {0.2, 9});
  CHECK(again.test.triplets == s.test.triplets);
  CHECK(again.train.triplets == s.train.triplets);

  std::vector<Rating> all = s.train.triplets;
  all.insert(all.end(), s.test.triplets.begin(), s.test.triplets.end());
  std::sort(all.begin(), all.end());
  std::sort(t.begin(), t.end());
  CHECK(all == t);

  CHECK_THROWS_AS(split(ds, {0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, {1.0, 1}), std::invalid_argument);
  CHECK_NOTHROW(split(ds, {0.01, 1}));  // ceil keeps one test triplet
  CHECK_THROWS_AS(split(RatingsDataset{}, {0.2, 1}), std::invalid_argument);
}

TEST_CASE("split conservation on larger data") {
  const auto ds = generate_synthetic({.users = 50, .items = 80, .ratings = 1234, .seed = 8});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = split(ds, {0.2, seed});
    CHECK(s.train.size() + s.test.size() == ds.size());
    CHECK(s.test.size() == 247);  // ceil(0.2 * 1234)
  }
}

TEST_CASE("synthetic presets have the published shapes") {
  const auto ldos = generate_synthetic(ldos_comoda_shape(7));
  CHECK(ldos.m == 121);
  CHECK(ldos.n == 1232);
  CHECK(ldos.size() == 2296);
  ldos.validate();
  std::set<std::size_t> users, items;
  std::set<std::pair<std::size_t, std::size_t>> cells;
  for (const auto& r : ldos.triplets) {
    users.insert(r.user);
    items.insert(r.item);
    cells.insert({r.user, r.item});
  }
  CHECK(users.size() == 121);
  CHECK(items.size() == 1232);
  CHECK(cells.size() == ldos.size());
  CHECK(generate_synthetic(ldos_comoda_shape(7)) == ldos);
  CHECK_THROWS_AS(synthetic_preset("netflix", 1), std::invalid_argument);
}

TEST_CASE("subsample re-compacts ids") {
  const auto ds = generate_synthetic({.users = 30, .items = 40, .ratings = 600, .seed = 2});
  const auto sub = subsample(ds, 100, 5);
  CHECK(sub.size() == 100);
  sub.validate();
  CHECK(sub.m <= 30);
  CHECK(subsample(ds, 100, 5) == sub);
  CHECK_THROWS_AS(subsample(ds, 0, 5), std::invalid_argument);
}
