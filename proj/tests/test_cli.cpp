#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "frns/cli.hpp"
#include "frns/config.hpp"
#include "frns/csv.hpp"
#include "frns/svg.hpp"

using namespace frns;
namespace fs = std::filesystem;

namespace {

const std::string source_dir = FRNS_SOURCE_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "frns");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    testing::internal::CaptureStdout();
    testing::internal::CaptureStderr();
    const int code = cli::run(static_cast<int>(argv.size()), argv.data());
    std::string out = testing::internal::GetCapturedStdout();
    std::string err = testing::internal::GetCapturedStderr();
    return {code, out, err};
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("frns_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The default config with one line replaced or appended.
fs::path variant(const std::string& name, const std::string& key, const std::string& value)
{
    std::istringstream in(read(source_dir + "/configs/default.cfg"));
    std::string text, line;
    bool replaced = false;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0 || line.rfind(key + "=", 0) == 0) {
            line = key + " = " + value;
            replaced = true;
        }
        text += line + "\n";
    }
    if (!replaced)
        text += key + " = " + value + "\n";
    const fs::path p = scratch(name) / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(Cli, ValidateShippedConfigs)
{
    for (const char* name : {"default.cfg", "double_well.cfg", "default_1d.cfg"}) {
        const Outcome o = run_cli({"validate", "--config", source_dir + "/configs/" + name});
        EXPECT_EQ(o.code, 0) << name << ": " << o.err;
        EXPECT_NE(o.out.find("(V1)"), std::string::npos);
        EXPECT_NE(o.out.find("kappa bound"), std::string::npos);
    }
}

TEST(Cli, ValidateNamesV1)
{
    const Outcome o = run_cli({"validate", "--config", variant("v1", "potential.V1", "1.0").string()});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("(V1)"), std::string::npos) << o.err;
}

TEST(Cli, ValidateNamesKappaBound)
{
    const Outcome o = run_cli({"validate", "--config", variant("kappa", "pen.kappa", "1").string()});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("kappa bound"), std::string::npos) << o.err;
}

TEST(Cli, ParseErrorsExitThreeWithLine)
{
    const Outcome unknown = run_cli({"validate", "--config", variant("unknown", "frac.q", "1").string()});
    EXPECT_EQ(unknown.code, 3);
    EXPECT_NE(unknown.err.find("line "), std::string::npos) << unknown.err;
    EXPECT_NE(unknown.err.find("frac.q"), std::string::npos) << unknown.err;

    const Outcome bad = run_cli({"validate", "--config", variant("bad", "frac.s", "half").string()});
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.err.find("frac.s"), std::string::npos) << bad.err;

    EXPECT_EQ(run_cli({"validate"}).code, 3);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
}

TEST(Cli, SStarRejectsCriticalDimension)
{
    const Outcome o = run_cli({"sstar", "--n-dim", "1", "--s", "0.6", "--out", scratch("sstar_bad").string()});
    EXPECT_EQ(o.code, 2);
}

TEST(Cli, KernelsPassAndCorruptedSigmaFails)
{
    const fs::path good = scratch("kernels_good");
    const Outcome ok = run_cli({"kernels", "--config", source_dir + "/configs/default.cfg", "--out", good.string()});
    EXPECT_EQ(ok.code, 0) << ok.out;
    const std::string csv = read(good / "kernels.csv");
    EXPECT_EQ(csv.rfind("# frns ", 0), 0u);
    EXPECT_NE(csv.find("config_sha256="), std::string::npos);
    EXPECT_NE(csv.find("check,computed,expected,tolerance,error,pass\r\n"), std::string::npos);
    EXPECT_TRUE(fs::exists(good / "manifest.json"));

    const fs::path bad = scratch("kernels_bad");
    const Outcome fail = run_cli(
        {"kernels", "--config", source_dir + "/configs/default.cfg", "--out", bad.string(), "--test-corrupt-sigma"});
    EXPECT_EQ(fail.code, 1);
}

TEST(Config, CanonicalFormIgnoresLayout)
{
    const RunConfig a = parse_config("frac.s = 0.5\nfrac.m=1\n# comment\n  model.eps = 0.2  # trailing\n");
    const RunConfig b = parse_config("model.eps=0.20\n\nfrac.m = 1.0\nfrac.s = 5e-1\n");
    EXPECT_EQ(canonical_config(a), canonical_config(b));
    EXPECT_EQ(sha256_hex(canonical_config(a)), sha256_hex(canonical_config(b)));
    EXPECT_NE(canonical_config(a), canonical_config(parse_config("frac.s = 0.25\n")));
}

TEST(Config, DuplicateKeyNamesLine)
{
    try {
        parse_config("frac.s = 0.5\n\nfrac.s = 0.25\n");
        FAIL();
    } catch (const ConfigParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Config, PointListsAndEpsList)
{
    const RunConfig c =
        parse_config("potential.minima = -1 0; 1 0.5\nsweep.eps = 0.4, 0.2, 0.1\nlambda.shape = box\n");
    ASSERT_EQ(c.model.potential.minima.size(), 2u);
    EXPECT_DOUBLE_EQ(c.model.potential.minima[1][1], 0.5);
    EXPECT_EQ(c.sweep_eps, (std::vector<double>{0.4, 0.2, 0.1}));
    EXPECT_EQ(c.model.potential.lambda.kind, Region::Kind::Box);
}

TEST(Config, EveryKeyIsDocumented)
{
    const std::string doc = read(source_dir + "/docs/config.md");
    for (const auto& [key, _] : config_keys())
        EXPECT_NE(doc.find("`" + key + "`"), std::string::npos) << key;
}

TEST(Config, Sha256KnownVector)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Csv, QuotesAndFormatsNumbers)
{
    CsvTable t("c", {"a", "b"});
    t.add_row({"x,y", "say \"hi\""});
    t.add_row({CsvTable::number(0.1), CsvTable::number(-2.5e-300)});
    EXPECT_EQ(t.str(), "# c\r\na,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n0.10000000000000001,-2.5e-300\r\n");
    EXPECT_THROW(t.add_row({"1"}), std::invalid_argument);
}

TEST(Svg, RendersPolyline)
{
    SvgPlot p;
    p.title = "a < b";
    p.log_y = true;
    p.series.push_back({{0, 1, 2}, {1, 0.1, 0.01}});
    const std::string s = p.render();
    EXPECT_EQ(s.rfind("<?xml", 0), 0u);
    EXPECT_NE(s.find("version=\"1.1\""), std::string::npos);
    EXPECT_NE(s.find("<polyline"), std::string::npos);
    EXPECT_NE(s.find("a &lt; b"), std::string::npos);
}
