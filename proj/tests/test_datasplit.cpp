#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drnet/csv.hpp"
#include "drnet/datasplit.hpp"
#include "drnet/errors.hpp"
#include "drnet/rng.hpp"

using namespace drnet;

namespace {

GlobalData make_test_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  GlobalData data;
  data.X.resize(n, p);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < p; ++c) data.X(r, c) = rng.standard_normal();
  data.y.resize(n);
  for (int r = 0; r < n; ++r) data.y(r) = rng.standard_normal();
  return data;
}

}  // namespace

TEST_CASE("an entry held by two agents splits in half") {
  GlobalData data;
  data.X = Eigen::MatrixXd::Zero(2, 2);
  data.X(0, 0) = 6.0;
  data.y = Eigen::VectorXd::Zero(2);

  AgentMask m1{1, {{1, 1}, {1, 2}, {2, 1}, {2, 2}}, {1, 2}};
  AgentMask m2{2, {{1, 1}}, {}};
  const auto summands = split_from_masks(data, {m1, m2});
  CHECK(summands[0].X(0, 0) == doctest::Approx(3.0));
  CHECK(summands[1].X(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("an entry held by one agent is carried in full, zeros elsewhere") {
  GlobalData data;
  data.X = Eigen::MatrixXd::Constant(2, 2, 5.0);
  data.y = Eigen::VectorXd::Constant(2, 7.0);
  AgentMask m1{1, {{1, 1}, {1, 2}}, {1}};
  AgentMask m2{2, {{2, 1}, {2, 2}}, {2}};
  const auto summands = split_from_masks(data, {m1, m2});
  CHECK(summands[0].X(0, 0) == 5.0);
  CHECK(summands[1].X(0, 0) == 0.0);
  CHECK(summands[0].X(1, 1) == 0.0);
  CHECK(summands[1].X(1, 1) == 5.0);
  CHECK(summands[0].y(0) == 7.0);
  CHECK(summands[0].y(1) == 0.0);
}

TEST_CASE("multiplicity k spreads value/k over exactly k summands") {
  GlobalData data;
  data.X = Eigen::MatrixXd::Constant(1, 1, 9.0);
  data.y = Eigen::VectorXd::Constant(1, 3.0);
  AgentMask m1{1, {{1, 1}}, {1}};
  AgentMask m2{2, {{1, 1}}, {1}};
  AgentMask m3{3, {{1, 1}}, {1}};
  AgentMask m4{4, {}, {}};
  const auto summands = split_from_masks(data, {m1, m2, m3, m4});
  for (int a = 0; a < 3; ++a) {
    CHECK(summands[a].X(0, 0) == doctest::Approx(3.0));
    CHECK(summands[a].y(0) == doctest::Approx(1.0));
  }
  CHECK(summands[3].X(0, 0) == 0.0);
  CHECK(summands[3].y(0) == 0.0);
}

TEST_CASE("overlapping preset reassembles the 20 x 40 data exactly") {
  const GlobalData data = make_test_data(20, 40, 11);
  const auto masks = preset_masks(SplitScheme::ArbitraryOverlapping, 20, 40, 6, 0);
  const auto summands = split_from_masks(data, masks);
  Eigen::MatrixXd sum_x = Eigen::MatrixXd::Zero(20, 40);
  Eigen::VectorXd sum_y = Eigen::VectorXd::Zero(20);
  for (const auto& s : summands) {
    sum_x += s.X;
    sum_y += s.y;
  }
  CHECK((sum_x - data.X).norm() <= 1e-12 * data.X.norm());
  CHECK((sum_y - data.y).norm() <= 1e-12 * data.y.norm());
}

TEST_CASE("coverage gaps are reported with the first uncovered index") {
  GlobalData data;
  data.X = Eigen::MatrixXd::Ones(2, 3);
  data.y = Eigen::VectorXd::Ones(2);
  AgentMask m1{1, {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}}, {1, 2}};  // (2, 3) missing
  AgentMask m2{2, {}, {}};
  try {
    split_from_masks(data, {m1, m2});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(2, 3)") != std::string::npos);
  }

  AgentMask full{1, {}, {1}};  // all cells, label 2 missing
  for (int r = 1; r <= 2; ++r)
    for (int c = 1; c <= 3; ++c) full.cells.emplace(r, c);
  try {
    split_from_masks(data, {full, m2});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("label row 2") != std::string::npos);
  }
}

TEST_CASE("columns preset gives contiguous halves and all labels to agent 1") {
  const auto masks = preset_masks(SplitScheme::Columns, 4, 4, 2, 0);
  std::set<int> cols1, cols2;
  for (const auto& [r, c] : masks[0].cells) cols1.insert(c);
  for (const auto& [r, c] : masks[1].cells) cols2.insert(c);
  CHECK(cols1 == std::set<int>{1, 2});
  CHECK(cols2 == std::set<int>{3, 4});
  CHECK(masks[0].label_rows == std::set<int>{1, 2, 3, 4});
  CHECK(masks[1].label_rows.empty());
  CHECK_THROWS_AS(preset_masks(SplitScheme::Columns, 4, 2, 3, 0), DataError);
}

TEST_CASE("rows preset matches label rows to example rows") {
  const auto masks = preset_masks(SplitScheme::Rows, 4, 2, 2, 0);
  CHECK(masks[0].label_rows == std::set<int>{1, 2});
  CHECK(masks[1].label_rows == std::set<int>{3, 4});
  std::set<int> rows1;
  for (const auto& [r, c] : masks[0].cells) rows1.insert(r);
  CHECK(rows1 == std::set<int>{1, 2});
  CHECK_THROWS_AS(preset_masks(SplitScheme::Rows, 2, 4, 3, 0), DataError);
}

TEST_CASE("blocks preset partitions the matrix as a grid") {
  const auto masks = preset_masks(SplitScheme::Blocks, 6, 6, 6, 0);  // 2 x 3 grid
  Eigen::MatrixXd mult = Eigen::MatrixXd::Zero(6, 6);
  for (const auto& mask : masks)
    for (const auto& [r, c] : mask.cells) mult(r - 1, c - 1) += 1.0;
  CHECK(mult.minCoeff() == 1.0);
  CHECK(mult.maxCoeff() == 1.0);
  std::set<int> label_union;
  for (const auto& mask : masks) label_union.insert(mask.label_rows.begin(), mask.label_rows.end());
  CHECK(label_union == std::set<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("overlapping preset covers everything with some multiplicity-2 cells") {
  const auto masks = preset_masks(SplitScheme::ArbitraryOverlapping, 20, 40, 6, 0);
  Eigen::MatrixXd mult = Eigen::MatrixXd::Zero(20, 40);
  for (const auto& mask : masks)
    for (const auto& [r, c] : mask.cells) mult(r - 1, c - 1) += 1.0;
  CHECK(mult.minCoeff() >= 1.0);
  int twos = 0;
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 40; ++c)
      if (mult(r, c) == 2.0) ++twos;
  CHECK(twos >= 1);
  CHECK(mult.maxCoeff() <= 2.0);
}

TEST_CASE("split result is independent of the mask ordering") {
  const GlobalData data = make_test_data(6, 5, 3);
  auto masks = preset_masks(SplitScheme::ArbitraryOverlapping, 6, 5, 3, 9);
  const auto direct = split_from_masks(data, masks);
  std::reverse(masks.begin(), masks.end());
  const auto reversed = split_from_masks(data, masks);
  for (std::size_t a = 0; a < direct.size(); ++a) {
    CHECK((direct[a].X - reversed[a].X).norm() == 0.0);
    CHECK((direct[a].y - reversed[a].y).norm() == 0.0);
  }
}

TEST_CASE("mask file round trip") {
  const auto masks = preset_masks(SplitScheme::ArbitraryOverlapping, 5, 4, 3, 17);
  const auto path = std::filesystem::temp_directory_path() / "drnet_masks_test.txt";
  write_mask_file(path.string(), masks);
  const auto back = read_mask_file(path.string(), 3);
  for (std::size_t a = 0; a < masks.size(); ++a) {
    CHECK(back[a].cells == masks[a].cells);
    CHECK(back[a].label_rows == masks[a].label_rows);
  }
  std::filesystem::remove(path);

  std::istringstream bad("agent 9 cell 1 1\n");
  CHECK_THROWS_AS(parse_masks(bad, 3, "test"), DataError);
}

TEST_CASE("csv matrix and vector round trip") {
  const GlobalData data = make_test_data(4, 3, 21);
  const auto dir = std::filesystem::temp_directory_path();
  const auto xp = (dir / "drnet_x_test.csv").string();
  const auto yp = (dir / "drnet_y_test.csv").string();
  write_csv_matrix(xp, data.X);
  write_csv_vector(yp, data.y);
  CHECK((read_csv_matrix(xp) - data.X).norm() == 0.0);
  CHECK((read_csv_vector(yp) - data.y).norm() == 0.0);
  std::filesystem::remove(xp);
  std::filesystem::remove(yp);

  CHECK_THROWS_AS(read_csv_matrix("/nonexistent/file.csv"), DataError);
}
