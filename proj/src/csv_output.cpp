#include "fairpic/csv_output.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "fairpic/error.hpp"

namespace fairpic {

namespace {

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, std::string_view header) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
        out_ << header << '\n';
    }

    template <typename... Args>
    void row(fmt::format_string<Args...> f, Args&&... args) {
        buffer_.clear();
        fmt::format_to(std::back_inserter(buffer_), f, std::forward<Args>(args)...);
        buffer_.push_back('\n');
        out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    }

private:
    std::ofstream out_;
    std::string buffer_;
};

}  // namespace

void write_states_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
    CsvFile csv(path, "replication,t,group,S,I,R,D");
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& states = runs[r].states;
        for (std::size_t t = 0; t < states.size(); ++t) {
            for (std::size_t j = 0; j < states[t].size(); ++j) {
                const auto& c = states[t].groups[j];
                csv.row("{},{},{},{},{},{},{}", r, t, j, c.s, c.i, c.r, c.d);
            }
        }
    }
}

void write_controls_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
    CsvFile csv(path, "replication,t,group,V,L");
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& controls = runs[r].controls;
        for (std::size_t t = 0; t < controls.size(); ++t) {
            for (std::size_t j = 0; j < controls[t].size(); ++j) {
                const auto& u = controls[t].groups[j];
                csv.row("{},{},{},{},{}", r, t, j, u.v, u.l);
            }
        }
    }
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    CsvFile csv(path, "t,group,variable,mean,p10,p90");
    for (const auto& row : rows) {
        csv.row("{},{},{},{},{},{}", row.t, row.group, row.variable, row.mean, row.p10, row.p90);
    }
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
    CsvFile csv(path, "replication,econ_loss,control_cost,unfairness_integral,unfairness_terminal,total_cost");
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& m = runs[r];
        csv.row("{},{},{},{},{},{}", r, m.econ_loss, m.control_cost, m.unfairness_integral, m.unfairness_terminal,
                m.total_cost);
    }
}

void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoRow>& rows) {
    CsvFile csv(path, "eta,mean_cost,mean_unfairness,stderr_cost,stderr_unfairness");
    for (const auto& row : rows) {
        csv.row("{},{},{},{},{}", row.label, row.mean_cost, row.mean_unfairness, row.stderr_cost,
                row.stderr_unfairness);
    }
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
    CsvFile csv(path, "samples,mean_runtime_s,mean_objective");
    for (const auto& row : rows) csv.row("{},{},{}", row.samples, row.mean_runtime_s, row.mean_objective);
}

void write_run_outputs(const std::filesystem::path& dir, const std::vector<RunRecord>& runs) {
    std::filesystem::create_directories(dir);
    write_states_csv(dir / "states.csv", runs);
    write_controls_csv(dir / "controls.csv", runs);
    write_summary_csv(dir / "summary.csv", summarize(runs));
    write_metrics_csv(dir / "metrics.csv", runs);
}

}  // namespace fairpic
