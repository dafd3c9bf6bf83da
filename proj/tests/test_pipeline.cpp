#include "bekk_fixtures.hpp"
#include "test_util.hpp"

#include "volspill/errors.hpp"
#include "volspill/pipeline.hpp"
#include "volspill/report.hpp"
#include "volspill/synthetic.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace volspill;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = VOLSPILL_SOURCE_DIR;
const fs::path kCli = VOLSPILL_CLI_PATH;

/// The bundled synthetic config with its data written into `dir`.
KeyValueConfig prepare_synthetic(const TempDir& dir, const std::map<std::string, std::string>& overrides = {}) {
    auto text = testutil::slurp(kSource / "data" / "synthetic.conf");
    text += "\noutput.dir = out\n";
    // replace the bundled output.dir with a local one
    const auto pos = text.find("output.dir = ../volspill_out\n");
    REQUIRE(pos != std::string::npos);
    text.erase(pos, std::string("output.dir = ../volspill_out\n").size());
    const auto path = dir.write("synthetic.conf", text);
    auto cfg = KeyValueConfig::load(path);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    simulate_dataset(cfg, dir.path());
    return cfg;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) out[fs::relative(entry.path(), root).string()] = testutil::slurp(entry.path());
    }
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + kCli.string() + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

PairReport fake_pair(const std::string& name, const std::string& commodity, const std::string& br, const std::string& us) {
    PairReport p;
    p.name = name;
    p.commodity = commodity;
    p.br_name = br;
    p.us_name = us;
    const std::vector<double> x{1.0, 2.0, 4.0, 3.0};
    p.stats = {summary_stats(br, x), summary_stats(us, x), summary_stats(br + "_Returns", x),
               summary_stats(us + "_Returns", x)};
    return p;
}

std::size_t lines_between(const std::string& text, const std::string& start, const std::string& stop) {
    const auto a = text.find(start);
    const auto b = text.find(stop, a + 1);
    std::istringstream in(text.substr(a, b - a));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    return n;
}

} // namespace

TEST_CASE("end-to-end run on the bundled synthetic dataset") {
    TempDir dir("pipe");
    const auto cfg = prepare_synthetic(dir);
    const auto pc = parse_pipeline_config(cfg, dir.path());
    const auto report = run(pc);
    CHECK(report.exit_status() == 0);
    REQUIRE(report.pairs.size() == 1);
    const auto& pair = report.pairs[0];
    CHECK(pair.status == StageStatus::Ok);
    REQUIRE(pair.subperiods.size() == 2);

    const auto& pre = pair.subperiods[0];
    const auto& post = pair.subperiods[1];
    CHECK(pre.label == Subperiod::Pre);
    CHECK(post.label == Subperiod::Post);
    CHECK(pre.end < pc.cut_date);
    CHECK_FALSE(post.start < pc.cut_date);

    // Pre has no cointegration: VAR; Post is cointegrated: VECM
    REQUIRE(pre.johansen.has_value());
    REQUIRE(post.johansen.has_value());
    CHECK(pre.johansen->rank == 0);
    CHECK(*pre.model_kind == ModelKind::VAR);
    CHECK(post.johansen->rank == 1);
    CHECK(*post.model_kind == ModelKind::VECM);
    CHECK(std::abs(post.johansen->beta.us + 1.07) < 0.05);
    for (const auto& s : pair.subperiods) {
        CHECK((s.johansen->rank >= 1) == (*s.model_kind == ModelKind::VECM));
        REQUIRE(s.integration.has_value());
        // a 5% test on a true random walk may reject its levels; differences must always reject
        CHECK(s.integration->br != IntegrationOrder::Higher);
        CHECK(s.integration->us != IntegrationOrder::Higher);
        CHECK(s.integration->br_diffs.rejects_at(Level::Pct1));
        CHECK(s.integration->us_diffs.rejects_at(Level::Pct1));
    }

    // BEKK recovery in the Post regime
    REQUIRE(post.bekk.has_value());
    REQUIRE(post.bekk->standard_errors.has_value());
    CHECK(post.bekk->convergence.converged);
    const auto spec = parse_synthetic_spec(cfg);
    const Vector13d truth = spec.post.bekk.to_vector();
    const Vector13d est = post.bekk->params.to_vector();
    for (int i = 2; i < 13; ++i) {
        INFO(BekkParams::kNames[static_cast<std::size_t>(i)]);
        CHECK(std::abs(est(i) - truth(i)) <= std::max(0.10, 3.0 * (*post.bekk->standard_errors)(i)));
    }

    for (const auto* f : {"report.json", "tables.txt", "sorriso/panel.csv", "sorriso/panel_Pre.csv",
                          "sorriso/residuals_Post.csv", "sorriso/covariance_Post.csv", "sorriso/sorriso_spillover.csv",
                          "sorriso/sorriso_decomposition.csv", "sorriso/sorriso_spillover.svg"}) {
        CHECK_MESSAGE(fs::exists(pc.output_dir / f), f);
    }
    const auto tables = testutil::slurp(pc.output_dir / "tables.txt");
    CHECK(tables.find("Table 5") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    TempDir dir("pipe");
    const auto cfg = prepare_synthetic(dir);
    auto pc = parse_pipeline_config(cfg, dir.path());
    pc.output_dir = dir.path() / "a";
    run(pc);
    pc.output_dir = dir.path() / "b";
    run(pc);
    const auto a = read_tree(dir.path() / "a");
    const auto b = read_tree(dir.path() / "b");
    CHECK(a.size() >= 10);
    CHECK(a == b);
}

TEST_CASE("report echoes the configuration") {
    TempDir dir("pipe");
    const auto cfg = prepare_synthetic(dir);
    const auto report = run(parse_pipeline_config(cfg, dir.path()));
    const auto j = to_json(report);
    CHECK(config_from_report(j) == cfg);
    std::ifstream in(dir.path() / "out" / "report.json");
    const auto disk = Json::parse(in);
    CHECK(config_from_report(disk) == cfg);
    CHECK(disk.at("version") == kVersion);
    CHECK(summarize(disk) == testutil::slurp(dir.path() / "out" / "tables.txt"));
}

TEST_CASE("a missing input file fails before any output is written") {
    TempDir dir("pipe");
    const auto path = dir.write("bad.conf",
                                "pairs = p\n"
                                "pair.p.br.spot = nowhere/br.csv\n"
                                "pair.p.us.spot = nowhere/us.csv\n"
                                "output.dir = out\n");
    try {
        load_pipeline_config(path);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("nowhere/br.csv") != std::string::npos);
    }
    CHECK_FALSE(fs::exists(dir.path() / "out"));
    CHECK(run_cli("run \"" + path.string() + "\"") == 1);
    CHECK_FALSE(fs::exists(dir.path() / "out"));
}

TEST_CASE("config validation") {
    TempDir dir("pipe");
    dir.write("br.csv", "date,price\n2020-01-06,1\n");
    const std::string base = "pairs = p\npair.p.br.spot = br.csv\npair.p.us.spot = br.csv\n";
    CHECK_NOTHROW(parse_pipeline_config(KeyValueConfig::parse(base), dir.path()));
    CHECK_THROWS_AS(parse_pipeline_config(KeyValueConfig::parse(base + "test.level = 7\n"), dir.path()), InputError);
    CHECK_THROWS_AS(parse_pipeline_config(KeyValueConfig::parse(base + "cut_date = 2010-13-01\n"), dir.path()),
                    InputError);
    CHECK_THROWS_AS(parse_pipeline_config(KeyValueConfig::parse(base + "pair.p.commodity = wheat\n"), dir.path()),
                    InputError);
    CHECK_THROWS_AS(parse_pipeline_config(KeyValueConfig::parse("pairs = p\npair.p.br.spot = br.csv\n"), dir.path()),
                    InputError);
    const auto pc = parse_pipeline_config(KeyValueConfig::parse(base + "dummy = none\ntest.level = 1\n"), dir.path());
    CHECK_FALSE(pc.dummy.has_value());
    CHECK(pc.level == Level::Pct1);
}

TEST_CASE("output directory override from the environment") {
    TempDir dir("pipe");
    dir.write("br.csv", "date,price\n2020-01-06,1\n");
    const auto cfg = KeyValueConfig::parse("pairs = p\npair.p.br.spot = br.csv\npair.p.us.spot = br.csv\n");
    const auto target = dir.path() / "elsewhere";
    setenv(kOutputDirEnv, target.c_str(), 1);
    const auto pc = parse_pipeline_config(cfg, dir.path());
    unsetenv(kOutputDirEnv);
    CHECK(pc.output_dir == target);
    CHECK(parse_pipeline_config(cfg, dir.path()).output_dir == dir.path() / "volspill_out");
}

TEST_CASE("a failing pair does not stop the others") {
    TempDir dir("pipe");
    auto cfg = prepare_synthetic(dir);
    // a second pair whose data is too short to estimate anything
    std::string short_spot = "date,price\n";
    for (const auto& d : testutil::business_days(30, Date{2009, 11, 2})) short_spot += d.iso() + ",10\n";
    dir.write("short.csv", short_spot);
    cfg.set("pairs", "sorriso, broken");
    cfg.set("pair.broken.br.spot", "short.csv");
    cfg.set("pair.broken.us.spot", "short.csv");
    const auto report = run(parse_pipeline_config(cfg, dir.path()));
    REQUIRE(report.pairs.size() == 2);
    CHECK(report.pairs[0].status == StageStatus::Ok);
    bool broken_failed = report.pairs[1].status != StageStatus::Ok;
    std::string context = report.pairs[1].error;
    for (const auto& s : report.pairs[1].subperiods) {
        if (s.status != StageStatus::Ok) {
            broken_failed = true;
            context = s.error;
        }
    }
    CHECK(broken_failed);
    CHECK(context.find("broken") != std::string::npos);
    CHECK(report.exit_status() != 0);
    CHECK(fs::exists(dir.path() / "out" / "sorriso" / "sorriso_spillover.csv"));
}

TEST_CASE("data without cointegration selects the VAR") {
    TempDir dir("pipe");
    const auto cfg = prepare_synthetic(dir, {{"sim.post.cointegrated", "false"}});
    const auto report = run(parse_pipeline_config(cfg, dir.path()));
    REQUIRE(report.pairs.size() == 1);
    for (const auto& s : report.pairs[0].subperiods) {
        REQUIRE(s.johansen.has_value());
        CHECK(s.johansen->rank == 0);
        CHECK(*s.model_kind == ModelKind::VAR);
    }
}

TEST_CASE("summary table layout") {
    RunReport report;
    report.pairs.push_back(fake_pair("sorriso", "corn", "Sorriso", "CME"));
    report.pairs.push_back(fake_pair("paranagua", "corn", "Paranagua", "CME"));
    report.pairs.push_back(fake_pair("soy", "soybean", "Paranagua_Soy", "CME_Soy"));
    const auto text = summarize(to_json(report));
    // header, rule and rows per commodity
    CHECK(lines_between(text, "corn ", "soybean") == 2 + 6);
    CHECK(lines_between(text, "soybean", "Table 2") == 2 + 4);
    const auto header_pos = text.find("corn ");
    const auto header = text.substr(header_pos, text.find('\n', header_pos) - header_pos);
    for (const auto* col : {"Mean", "Median", "Standard Error", "Skewness", "Excess Kurtosis", "N"}) {
        CHECK(header.find(col) != std::string::npos);
    }

    RunReport flat;
    PairReport p;
    p.name = "flat";
    p.commodity = "corn";
    p.br_name = "Flat";
    p.us_name = "CME";
    const std::vector<double> c(20, 3.0);
    p.stats = {summary_stats("Flat", c)};
    flat.pairs.push_back(p);
    const auto t = summarize(to_json(flat));
    const auto row = t.substr(t.find("Flat "), t.find('\n', t.find("Flat ")) - t.find("Flat "));
    CHECK(row.find("NA") != std::string::npos);
}

TEST_CASE("command line") {
    TempDir dir("cli");
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("summarize \"" + (dir.path() / "none.json").string() + "\"") == 1);
    dir.write("bad.json", "{ not json");
    CHECK(run_cli("summarize \"" + (dir.path() / "bad.json").string() + "\"") == 1);

    prepare_synthetic(dir);
    CHECK(run_cli("simulate \"" + (dir.path() / "synthetic.conf").string() + "\"") == 0);
    CHECK(run_cli("run \"" + (dir.path() / "synthetic.conf").string() + "\"") == 0);
    CHECK(fs::exists(dir.path() / "out" / "report.json"));
    CHECK(run_cli("summarize \"" + (dir.path() / "out" / "report.json").string() + "\"") == 0);

    // a bekk run that cannot converge maps to exit status 2
    const auto tight = testutil::slurp(dir.path() / "synthetic.conf") + "optimizer.max_iterations = 2\n";
    dir.write("tight.conf", tight);
    CHECK(run_cli("run \"" + (dir.path() / "tight.conf").string() + "\"") == 2);
}
