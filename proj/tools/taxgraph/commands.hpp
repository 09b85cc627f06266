#pragma once
// Subcommand implementations behind the taxgraph CLI.
//
// Exit codes: 0 success (warnings allowed), 2 usage or parse error,
// 3 runtime failure (broken bundle, empty denominator, network).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace taxgraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

struct IngestArgs {
    std::string entities;
    std::string relationships;
    std::string indicators;
    std::string legal_forms;
    std::string out_dir;
    bool quiet = false;
};

struct LinkArgs {
    std::string graph_dir;
    std::string candidates;
    double threshold = 0.3;
    bool quiet = false;
};

struct DetectArgs {
    std::string graph_dir;
    std::string builtin;       // "double-irish" | "duck-rabbit"
    std::string pattern_file;  // DSL file, mutually exclusive with builtin
    bool relaxed = false;
    std::vector<std::string> havens;  // duck-rabbit
    std::string country_a = "IE";
    std::string country_b = "NL";
    std::string country_c = "IE";
    std::string child_country = "NL";
    std::string child_form = "54M6";
    int max_path_len = 10;
    std::size_t max_results = 0;  // 0 = unlimited
    std::string out_path;
    bool quiet = false;
};

struct StatsArgs {
    std::string graph_dir;
    std::string metric;
    MetricOptions options;
    std::string areas_file;  // loaded into options.areas when set
    std::string out_path;
    bool quiet = false;
};

struct FetchAreasArgs {
    std::string graph_dir;
    std::string endpoint;
    std::string offline_file;
    double timeout_seconds = 30.0;
    std::size_t batch = 100;
    int retries = 2;
    int parallelism = 2;
    std::string out_path;
    bool quiet = false;
};

struct ExportArgs {
    std::string graph_dir;
    std::string out_dir;
    std::string areas_file;
    std::size_t min_companies = 1000;
    std::size_t top = 0;  // 0 = unlimited
    bool quiet = false;
};

int run_ingest(const IngestArgs& args);
int run_link_cities(const LinkArgs& args);
int run_detect(const DetectArgs& args);
int run_stats(const StatsArgs& args);
int run_fetch_areas(const FetchAreasArgs& args);
int run_export(const ExportArgs& args);

}  // namespace taxgraph::cli
