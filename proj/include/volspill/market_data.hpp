#pragma once

#include "volspill/date.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace volspill {

struct PricePoint {
    Date date;
    double value = 0.0;
};

struct ContractRow {
    Date date;
    double price = 0.0;
    std::int64_t volume = 0;
};

/// One futures contract: settlement prices and traded volume per date.
struct RawContractSeries {
    std::string contract_id;
    std::chrono::year_month expiry{};
    std::vector<ContractRow> rows;
};

/// Dated prices at one location (local currency per local unit, or US$/bu after conversion).
struct SpotSeries {
    std::string location;
    std::vector<PricePoint> rows;
};

/// Local-currency units per reference-currency unit.
struct FxSeries {
    std::vector<PricePoint> rows;
};

enum class Subperiod { Pre, Post, Full };

std::string to_string(Subperiod s);

/// Inner-joined log prices (log US$/bu) for one Brazil/U.S. pair.
struct AlignedPanel {
    std::vector<Date> dates;
    std::vector<double> br;
    std::vector<double> us;
    Subperiod label = Subperiod::Full;

    [[nodiscard]] std::size_t size() const { return dates.size(); }
};

/// First differences of an AlignedPanel; dates are those of the later observation.
struct ReturnsPanel {
    std::vector<Date> dates;
    std::vector<double> dbr;
    std::vector<double> dus;

    [[nodiscard]] std::size_t size() const { return dates.size(); }
};

enum class SeriesSchema { Contract, Spot, Fx };

using AnySeries = std::variant<RawContractSeries, SpotSeries, FxSeries>;

/// Reads a comma-separated file: `date,price,volume` (contract, with `# contract_id:` and
/// `# expiry: YYYY-MM` metadata lines ahead of the header), `date,price` (spot) or
/// `date,rate` (fx). Throws InputError with row-numbered diagnostics.
AnySeries load_series(const std::filesystem::path& path, SeriesSchema schema);

RawContractSeries load_contract(const std::filesystem::path& path);
SpotSeries load_spot(const std::filesystem::path& path);
FxSeries load_fx(const std::filesystem::path& path);

void write_spot_csv(const SpotSeries& s, const std::filesystem::path& path);
void write_fx_csv(const FxSeries& fx, const std::filesystem::path& path);
void write_contract_csv(const RawContractSeries& c, const std::filesystem::path& path);

/// Index of the active contract for every trading date in the union of contract dates.
struct RollSchedule {
    std::vector<Date> dates;
    std::vector<std::size_t> active;
};

/// Volume-crossover roll: switch to the next contract on the first date its volume strictly
/// exceeds the active contract's, or on the active contract's final trading date at the latest.
RollSchedule roll_schedule(std::span<const RawContractSeries> contracts);

SpotSeries build_nearby(std::span<const RawContractSeries> contracts);

struct UnitConversion {
    double kg_per_local_unit = 60.0;
    double kg_per_bushel = 25.4012;
};

inline constexpr double kKgPerBushelCorn = 25.4012;
inline constexpr double kKgPerBushelSoybean = 27.2155;
inline constexpr double kKgPerLocalBag = 60.0;

enum class MissingFx { Error, Drop };

/// FX quotes are carried forward at most `stale_window_days` calendar days.
struct FxPolicy {
    int stale_window_days = 5;
    MissingFx on_missing = MissingFx::Drop;
};

SpotSeries convert_to_usd_per_bushel(const SpotSeries& s, const FxSeries& fx, UnitConversion units,
                                     FxPolicy policy = {});

/// Inverse of convert_to_usd_per_bushel under the same FX lookup.
SpotSeries convert_from_usd_per_bushel(const SpotSeries& s, const FxSeries& fx, UnitConversion units,
                                       FxPolicy policy = {});

AlignedPanel align(const SpotSeries& br, const SpotSeries& us);

ReturnsPanel returns(const AlignedPanel& p);

/// Pre holds dates before `cut`, Post the rest. Both halves must be nonempty.
std::pair<AlignedPanel, AlignedPanel> split_subperiods(const AlignedPanel& p, Date cut);

void write_panel_csv(const AlignedPanel& p, const std::filesystem::path& path);

} // namespace volspill
