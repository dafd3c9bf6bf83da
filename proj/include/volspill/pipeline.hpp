#pragma once

#include "volspill/bekk.hpp"
#include "volspill/cointegration.hpp"
#include "volspill/config.hpp"
#include "volspill/market_data.hpp"
#include "volspill/mean_model.hpp"
#include "volspill/stats.hpp"
#include "volspill/unit_root.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace volspill {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable that overrides `output.dir`.
inline constexpr const char* kOutputDirEnv = "VOLSPILL_OUTPUT_DIR";

/// Where one market's prices come from. Brazil prices with an `fx` file are converted from local
/// currency per local unit; U.S. prices may be a spot file or a set of futures contracts.
struct SeriesSource {
    std::string name;
    std::optional<std::filesystem::path> spot;
    std::vector<std::filesystem::path> contracts;
    std::optional<std::filesystem::path> contracts_dir;
    std::optional<std::filesystem::path> fx;
};

struct PairConfig {
    std::string name;
    std::string commodity = "corn";
    SeriesSource br;
    SeriesSource us;
    UnitConversion units;
};

struct PipelineConfig {
    std::vector<PairConfig> pairs;
    Date cut_date{2010, 1, 1};
    Level level = Level::Pct5;
    int max_lag = 10;
    std::optional<DateInterval> dummy = DateInterval{Date{2016, 1, 1}, Date{2016, 12, 31}};
    FxPolicy fx_policy;
    BekkConfig optimizer;
    std::filesystem::path output_dir = "volspill_out";
    std::uint64_t seed = 42;
    std::map<std::string, double> plot_y_max{{"corn", 0.2}, {"soybean", 2.0}};
    int smoothing_window = 1;
    KeyValueConfig source;
};

/// Reads a pipeline configuration. Relative paths resolve against `base_dir`. With
/// `check_inputs` every input path must exist, so a bad path fails before any output is
/// written. Throws InputError.
PipelineConfig parse_pipeline_config(const KeyValueConfig& cfg, const std::filesystem::path& base_dir,
                                     bool check_inputs = true);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

enum class StageStatus { Ok, InputFailure, NonConvergence, InternalFailure };

struct SubperiodReport {
    Subperiod label = Subperiod::Full;
    Date start;
    Date end;
    std::size_t nobs = 0;
    StageStatus status = StageStatus::Ok;
    std::string error;  ///< with pair/subperiod context
    std::optional<PanelIntegration> integration;
    std::optional<JohansenResult> johansen;
    std::optional<ModelKind> model_kind;
    int lag = 0;
    std::optional<MeanModelFit> mean;
    std::optional<BekkFit> bekk;
    std::map<std::string, std::string> outputs;
};

struct PairReport {
    std::string name;
    std::string commodity;
    std::string br_name;
    std::string us_name;
    StageStatus status = StageStatus::Ok;
    std::string error;
    std::vector<SummaryStats> stats;  ///< br level, us level, br returns, us returns
    std::vector<SubperiodReport> subperiods;
    std::map<std::string, std::string> outputs;
};

struct RunReport {
    std::string version = kVersion;
    KeyValueConfig config;
    std::vector<PairReport> pairs;

    /// 0 success, 1 input error, 2 non-convergence, 3 internal error (worst across pairs).
    [[nodiscard]] int exit_status() const;
};

/// Runs every pair and subperiod: align, ADF, Johansen, VAR or VECM by rank, BEKK, spillovers.
/// Writes panel, residual, covariance, spillover and report files under config.output_dir.
/// Failures are confined to the pair/subperiod where they occur.
RunReport run(const PipelineConfig& config);

/// Writes the synthetic dataset for the `sim.pair` entry to the paths that pair is configured with.
void simulate_dataset(const KeyValueConfig& cfg, const std::filesystem::path& base_dir);

} // namespace volspill
