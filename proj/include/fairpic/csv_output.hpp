#pragma once

#include <filesystem>
#include <vector>

#include "fairpic/experiment.hpp"

namespace fairpic {

// All writers emit UTF-8 with a header row, '.' decimals and shortest round-trip
// number formatting, so equal inputs give byte-identical files.

void write_states_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);
void write_controls_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);
void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoRow>& rows);
void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

/// states.csv, controls.csv, summary.csv and metrics.csv under `dir`.
void write_run_outputs(const std::filesystem::path& dir, const std::vector<RunRecord>& runs);

}  // namespace fairpic
