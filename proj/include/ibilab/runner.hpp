#pragma once

#include <string>
#include <vector>

#include "ibilab/config.hpp"
#include "ibilab/ibi.hpp"
#include "ibilab/simulate.hpp"

namespace ibilab {

inline constexpr char kVersion[] = "0.1.0";

struct RunResult {
  std::vector<std::string> outputs;  // files written (relative to out_dir)
};

// Subcommand drivers. Each writes its CSV artifacts plus manifest.json into
// out_dir; on failure partial outputs are removed and the exception rethrown.
RunResult run_dpss_dump(const ExperimentConfig& config, const std::string& out_dir,
                        const std::string& csv_name = "dpss.csv");
RunResult run_s2ibi(const ExperimentConfig& config, const std::string& out_dir,
                    const std::string& csv_name = "s2ibi.csv");
RunResult run_bound(const ExperimentConfig& config, const std::string& out_dir,
                    const std::string& csv_name = "bound.csv");
RunResult run_ber_command(const ExperimentConfig& config, const std::string& out_dir,
                          const std::string& csv_name = "ber.csv");
// The four S2IBI tables (mild/severe x integer/fractional) and four BER tables
// of the reference experiment set, from one base config (seed, layout, grids).
RunResult run_reproduce(const ExperimentConfig& config, const std::string& out_dir);

// CSV writers used by the drivers (and tests). 17 significant digits, '.'
// decimal separator, '\n' line endings.
void write_s2ibi_csv(const std::string& path, const std::vector<IbiReport>& table,
                     std::uint64_t seed);
void write_bound_csv(const std::string& path, const std::vector<IbiReport>& table,
                     std::uint64_t seed);
void write_ber_csv(const std::string& path, const std::vector<BerCurve>& curves);

}  // namespace ibilab
