#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <csvt/ingest.hpp>
#include <csvt/rng.hpp>

using csvt::ingest::CsvSpec;
using csvt::ingest::Orientation;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path((std::filesystem::temp_directory_path() / name).string()) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("load csv transposes samples-as-rows input", "[ingest]") {
  TempFile f("csvt_basic.csv", "1,2\n3,4\n");
  csvt::DataMatrix X = csvt::ingest::load_csv(f.path);
  REQUIRE(X.rows() == 2);
  REQUIRE(X.cols() == 2);
  REQUIRE(X(0, 0) == 1.0);
  REQUIRE(X(1, 0) == 2.0);
  REQUIRE(X(0, 1) == 3.0);
  REQUIRE(X(1, 1) == 4.0);
}

TEST_CASE("load csv orientation, header, and label column", "[ingest]") {
  TempFile f("csvt_opts.csv", "a,b,c\n1,2,x\n3,4,y\n");
  CsvSpec spec;
  spec.has_header = true;
  spec.label_column = 2;
  csvt::DataMatrix X = csvt::ingest::load_csv(f.path, spec);
  REQUIRE(X.rows() == 2);
  REQUIRE(X.cols() == 2);

  TempFile g("csvt_cols.csv", "1,2,3\n4,5,6\n");
  CsvSpec cols;
  cols.orientation = Orientation::samples_as_columns;
  csvt::DataMatrix Y = csvt::ingest::load_csv(g.path, cols);
  REQUIRE(Y.rows() == 2);
  REQUIRE(Y.cols() == 3);
  REQUIRE(Y(1, 2) == 6.0);
}

TEST_CASE("load csv handles delimiters and CRLF", "[ingest]") {
  TempFile f("csvt_semi.csv", "1;2\r\n3;4\r\n");
  CsvSpec spec;
  spec.delimiter = ';';
  csvt::DataMatrix X = csvt::ingest::load_csv(f.path, spec);
  REQUIRE(X(1, 1) == 4.0);

  CsvSpec bad;
  bad.delimiter = '\t';  // unprintable delimiters are rejected
  REQUIRE_THROWS_AS(csvt::ingest::load_csv(f.path, bad), std::invalid_argument);
}

TEST_CASE("load csv error paths", "[ingest]") {
  REQUIRE_THROWS_WITH(csvt::ingest::load_csv("/nonexistent/file.csv"),
                      Catch::Matchers::ContainsSubstring("cannot open"));

  TempFile ragged("csvt_ragged.csv", "1,2\n3,4,5\n");
  REQUIRE_THROWS_WITH(csvt::ingest::load_csv(ragged.path),
                      Catch::Matchers::ContainsSubstring("ragged"));

  TempFile bad("csvt_bad.csv", "1,2\n3,oops\n");
  try {
    csvt::ingest::load_csv(bad.path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("oops") != std::string::npos);
    REQUIRE(msg.find("row 2") != std::string::npos);
    REQUIRE(msg.find("column 2") != std::string::npos);
  }

  TempFile empty("csvt_empty.csv", "");
  REQUIRE_THROWS_WITH(csvt::ingest::load_csv(empty.path),
                      Catch::Matchers::ContainsSubstring("no data rows"));

  TempFile labelonly("csvt_labelonly.csv", "7\n8\n");
  CsvSpec spec;
  spec.label_column = 0;
  REQUIRE_THROWS_AS(csvt::ingest::load_csv(labelonly.path, spec),
                    std::runtime_error);

  TempFile oob("csvt_oob.csv", "1,2\n3,4\n");
  CsvSpec oobspec;
  oobspec.label_column = 5;
  REQUIRE_THROWS_WITH(csvt::ingest::load_csv(oob.path, oobspec),
                      Catch::Matchers::ContainsSubstring("label column"));
}

TEST_CASE("save and load round trip at full precision", "[ingest]") {
  auto eng = csvt::rng::make_engine(71);
  std::normal_distribution<double> gauss(0.0, 1.0);
  csvt::DataMatrix X(6, 9);
  for (Eigen::Index j = 0; j < 9; ++j)
    for (Eigen::Index i = 0; i < 6; ++i) X(i, j) = gauss(eng);
  const std::string path =
      (std::filesystem::temp_directory_path() / "csvt_rt.csv").string();
  std::vector<int> labels(9, 1);
  csvt::ingest::save_csv(X, path, &labels);
  csvt::DataMatrix Y = csvt::ingest::load_csv(path);
  REQUIRE((X.array() == Y.array()).all());
  REQUIRE(std::filesystem::exists(path + ".labels"));
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".labels");
}

TEST_CASE("file estimation is deterministic", "[ingest]") {
  std::string content;
  auto eng = csvt::rng::make_engine(72);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 5; ++j) os << (j ? "," : "") << gauss(eng);
    os << '\n';
  }
  TempFile f("csvt_det.csv", os.str());
  auto a = csvt::ingest::estimate_file(f.path);
  auto b = csvt::ingest::estimate_file(f.path);
  REQUIRE(a.k_hat == b.k_hat);
  REQUIRE((a.spectrum.singular_values.array() ==
           b.spectrum.singular_values.array()).all());
}

TEST_CASE("dataset presets match the published table", "[ingest]") {
  auto iris = csvt::ingest::find_preset("iris");
  REQUIRE(iris.expected_n == 150);
  REQUIRE(iris.expected_p == 4);
  REQUIRE(iris.true_k == 3);
  REQUIRE(iris.expected_k_hat == 2);

  auto crab = csvt::ingest::find_preset("crab");
  REQUIRE(crab.expected_n == 200);
  REQUIRE(crab.expected_p == 5);
  REQUIRE(crab.expected_k_hat == 2);

  auto usps = csvt::ingest::find_preset("usps");
  REQUIRE(usps.expected_n == 7291);
  REQUIRE(usps.expected_p == 256);
  REQUIRE(usps.expected_k_hat == 10);

  auto poker = csvt::ingest::find_preset("poker");
  REQUIRE(poker.expected_n == 25010);
  REQUIRE(poker.expected_p == 10);
  REQUIRE(poker.expected_k_hat == 10);

  REQUIRE_THROWS_AS(csvt::ingest::find_preset("wine"), std::invalid_argument);
}

TEST_CASE("preset check skips missing files and flags bad shapes", "[ingest]") {
  auto iris = csvt::ingest::find_preset("iris");
  auto missing = csvt::ingest::preset_check(iris, "/nonexistent/iris.csv");
  REQUIRE(missing.outcome == csvt::ingest::PresetOutcome::skipped);

  std::ostringstream os;
  for (int i = 0; i < 100; ++i) os << "1,2,3,4,0\n";
  TempFile truncated("csvt_iris_short.csv", os.str());
  auto bad = csvt::ingest::preset_check(iris, truncated.path);
  REQUIRE(bad.outcome == csvt::ingest::PresetOutcome::failed);
  REQUIRE(bad.detail.find("dimension mismatch") != std::string::npos);
}
