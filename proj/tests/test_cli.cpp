#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "gaborpd/errors.hpp"
#include "gaborpd/image_io.hpp"
#include "gaborpd/run_config.hpp"
#include "gaborpd/synthetic.hpp"
#include "support.hpp"

using namespace gaborpd;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    const std::string name = ::testing::UnitTest::GetInstance()->current_test_info()->name();
    dir_ = fs::temp_directory_path() / ("gaborpd_cli_" + name);
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

RepeatabilityReport report(Family f, std::vector<double> values) {
  RepeatabilityReport r;
  r.family = f;
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.per_pair.push_back({"p" + std::to_string(i), 10, 10, 0, values[i]});
  }
  return r;
}

}  // namespace

TEST(RunConfigFile, RoundTripIsIdempotent) {
  RunConfig cfg;
  cfg.family = Family::Haar;
  cfg.detector = DetectorKind::Corner;
  cfg.ladder = ScaleLadder{1.1, 1.37, 6};
  cfg.edge_method = EdgeMethod::ZeroCrossing;
  cfg.harris_k = 0.06;
  cfg.max_count = 17;
  cfg.report_out = "out dir/r.csv";
  std::ostringstream a;
  write_run_config(a, cfg);
  std::istringstream in(a.str());
  const RunConfig back = parse_run_config(in);
  std::ostringstream b;
  write_run_config(b, back);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(back.family, Family::Haar);
  EXPECT_EQ(back.ladder.ratio, 1.37);
  EXPECT_EQ(back.max_count, 17u);
  EXPECT_EQ(back.report_out, "out dir/r.csv");
}

TEST(RunConfigFile, CommentsAndErrors) {
  std::istringstream ok("# settings\n\nfamily = gaussian  # trailing\nblob_threshold=0.2\n");
  const RunConfig cfg = parse_run_config(ok);
  EXPECT_EQ(cfg.family, Family::GaussianDerivative);
  EXPECT_EQ(cfg.blob_threshold, 0.2);
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(parse_run_config(unknown), FormatError);
  std::istringstream bad_number("harris_k = lots\n");
  EXPECT_THROW(parse_run_config(bad_number), FormatError);
  std::istringstream no_equals("family gabor\n");
  EXPECT_THROW(parse_run_config(no_equals), FormatError);
  std::istringstream out_of_range("harris_k = 0.5\n");
  EXPECT_THROW(parse_run_config(out_of_range), DomainError);
}

TEST(KeypointFile, WriteReadRoundTrip) {
  gaborpd::testing::Rand r(601);
  std::vector<Keypoint> kps;
  for (int i = 0; i < 20; ++i) {
    Keypoint k{r.uniform(0, 100), r.uniform(0, 100), r.uniform(1, 5), r.uniform(-1, 1), std::nullopt};
    const double v = 1.0 / std::pow(kRegionScale * k.sigma, 2);
    k.ellipse = Ellipse{v * 1.3, v * 0.2, v / 1.3};
    kps.push_back(k);
  }
  std::stringstream ss;
  cli::write_keypoints(ss, kps, "test");
  const auto back = cli::read_keypoints(ss);
  ASSERT_EQ(back.size(), kps.size());
  for (std::size_t i = 0; i < kps.size(); ++i) {
    EXPECT_EQ(back[i].x, kps[i].x);
    EXPECT_EQ(back[i].sigma, kps[i].sigma);
    EXPECT_EQ(back[i].response, kps[i].response);
    ASSERT_TRUE(back[i].ellipse.has_value());
    EXPECT_EQ(back[i].ellipse->b, kps[i].ellipse->b);
  }
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(cli::read_keypoints(bad), FormatError);
}

TEST(SequenceFile, ParsesRecordsAndRejectsShortLines) {
  std::istringstream in("# label h00..h22\nshift 1 0 5 0 1 -2 0 0 1\n\nscale 2 0 0 0 2 0 0 0 1  # doubled\n");
  const auto seq = cli::read_sequence(in);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq[0].label, "shift");
  const auto [x, y] = seq[0].H.apply(1.0, 1.0);
  EXPECT_DOUBLE_EQ(x, 6.0);
  EXPECT_DOUBLE_EQ(y, -1.0);
  EXPECT_EQ(seq[1].label, "scale");
  std::istringstream bad("view 1 0 0 0 1\n");
  EXPECT_THROW(cli::read_sequence(bad), FormatError);
}

TEST(OrderingCheck, AcceptsAndRejects) {
  const std::vector<RepeatabilityReport> good{report(Family::GaussianDerivative, {0.9, 0.8, 0.7}),
                                              report(Family::Gabor, {0.85, 0.75, 0.65}),
                                              report(Family::Haar, {0.8, 0.6, 0.5})};
  EXPECT_TRUE(cli::ordering_holds(good));
  auto swapped = good;
  swapped[1].per_pair[0].repeatability = 1.0;
  swapped[1].per_pair[1].repeatability = 1.0;
  std::string why;
  EXPECT_FALSE(cli::ordering_holds(swapped, &why));
  EXPECT_FALSE(why.empty());
  auto wide_gap = good;
  for (auto& p : wide_gap[1].per_pair) p.repeatability -= 0.2;
  for (auto& p : wide_gap[2].per_pair) p.repeatability -= 0.3;
  EXPECT_FALSE(cli::ordering_holds(wide_gap));
  auto haar_tie = good;
  haar_tie[2].per_pair[2].repeatability = 0.65;
  EXPECT_FALSE(cli::ordering_holds(haar_tie));
}

TEST_F(CliTest, KernelCommandWritesKernelFile) {
  ASSERT_EQ(run({"kernel", "--fit", "second", "-o", path("k.txt"), "--profile", path("k.png")}), 0) << err_.str();
  EXPECT_NE(out_.str().find("xi"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("k.png")));
  std::ifstream in(path("k.txt"));
  const Kernel1D k = read_kernel_text(in);
  EXPECT_GT(k.size(), 3u);
  EXPECT_NE(run({"kernel", "--fit", "sideways"}), 0);
}

TEST_F(CliTest, DetectOnBlankImageWritesHeaderOnly) {
  write_png(path("blank.png"), ImageGray(96, 96, 0.5));
  ASSERT_EQ(run({"detect", path("blank.png"), "-o", path("kp.txt"), "--vis", path("kp.png")}), 0) << err_.str();
  std::ifstream in(path("kp.txt"));
  EXPECT_TRUE(cli::read_keypoints(in).empty());
  EXPECT_NE(slurp(path("kp.txt")).find("# count 0"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("kp.png")));
}

TEST_F(CliTest, DetectIsDeterministicAcrossDetectors) {
  for (const std::string det : {"blob", "corner", "edge"}) {
    const std::vector<std::string> args{"--seed", "3",     "detect", "synthetic",           "--detector",
                                        det,      "-o",    path("a.txt"), "--vis",          path("a.png")};
    ASSERT_EQ(run(args), 0) << err_.str();
    const std::string first = slurp(path("a.txt"));
    ASSERT_EQ(run(args), 0);
    EXPECT_EQ(first, slurp(path("a.txt"))) << det;
    std::istringstream in(first);
    EXPECT_FALSE(cli::read_keypoints(in).empty()) << det;
  }
}

TEST_F(CliTest, ConfigFileAndGlobalFlags) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "family = haar\ndetector = corner\nmax_count = 5\n";
  }
  ASSERT_EQ(run({"--config", path("run.cfg"), "--border", "replicate", "--threads", "1", "detect", "synthetic", "-o",
                 path("c.txt"), "--vis", path("c.png")}),
            0)
      << err_.str();
  std::ifstream in(path("c.txt"));
  EXPECT_EQ(cli::read_keypoints(in).size(), 5u);
  EXPECT_NE(slurp(path("c.txt")).find("haar"), std::string::npos);
  EXPECT_EQ(run({"--border", "mirror", "detect", "synthetic", "-o", path("d.txt")}), 2);
  EXPECT_NE(run({"--config", path("missing.cfg"), "detect", "synthetic"}), 0);
}

TEST_F(CliTest, EvaluateIdentityOnly) {
  ASSERT_EQ(run({"evaluate", "--identity-only", "--families", "gabor", "-o", path("r.csv")}), 0) << err_.str();
  std::ifstream in(path("r.csv"));
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(row.rfind("gabor,identity,", 0), 0u) << row;
  EXPECT_NE(row.find("1.000000"), std::string::npos);

  ASSERT_EQ(run({"evaluate", "--identity-only", "-o", path("r3.csv")}), 0);
  std::ifstream in3(path("r3.csv"));
  int rows = 0;
  for (std::string line; std::getline(in3, line);) ++rows;
  EXPECT_EQ(rows, 4);
  // All three families tie on the identity pair, so haar is not strictly worst.
  EXPECT_EQ(run({"evaluate", "--identity-only", "--assert-ordering", "-o", path("r4.csv")}), 1);
  EXPECT_NE(err_.str().find("ordering"), std::string::npos);
}

TEST_F(CliTest, EvaluateWithSequenceFile) {
  {
    std::ofstream seq(path("seq.txt"));
    seq << "shift 1 0 3 0 1 2 0 0 1\n";
  }
  ASSERT_EQ(run({"evaluate", "--sequence", path("seq.txt"), "--families", "gaussian", "-o", path("s.csv")}), 0)
      << err_.str();
  const std::string csv = slurp(path("s.csv"));
  EXPECT_NE(csv.find("gaussian,shift,"), std::string::npos);
}

TEST_F(CliTest, OrientWritesImages) {
  write_png(path("g.png"), grating(48, 40, 0.3, 1.0));
  ASSERT_EQ(run({"orient", path("g.png"), "--angles", "0", "60", "120", "--prefix", path("o")}), 0) << err_.str();
  for (const char* f : {"o_0.png", "o_60.png", "o_120.png", "o_argmax.png", "o_max.png"}) {
    EXPECT_TRUE(fs::exists(path(f))) << f;
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(run({}), 0);
  EXPECT_NE(run({"frobnicate"}), 0);
  EXPECT_EQ(run({"detect", path("nope.pgm")}), 2);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("evaluate"), std::string::npos);
}
