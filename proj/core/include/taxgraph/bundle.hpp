#pragma once
// Graph bundle: a directory of normalized CSVs plus a tamper-evident run
// manifest. Debuggable and diffable by design; no binary index format.
//
//   <bundle>/entities.csv        level-1 companies (stubs excluded)
//   <bundle>/relationships.csv   level-2 edges
//   <bundle>/indicators.csv      country indicators
//   <bundle>/legalforms.csv      ELF code -> name
//   <bundle>/citylinks.csv       optional, written by link-cities
//   <bundle>/manifest.json       digests, command, parameters

#include <filesystem>
#include <span>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taxgraph/errors.hpp"
#include "taxgraph/ingest.hpp"

namespace taxgraph {

struct ManifestEntry {
    std::string path;  // relative to the manifest location
    std::string sha256;

    bool operator==(const ManifestEntry&) const = default;
};

struct RunManifest {
    std::string tool;
    std::string version;
    std::string command;
    std::vector<std::string> parameters;
    std::vector<ManifestEntry> inputs;
    std::vector<ManifestEntry> outputs;

    bool operator==(const RunManifest&) const = default;
};

std::string sha256_file(const std::filesystem::path& path);  // throws Error on IO failure

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);  // throws BundleError

// Recomputes digests of `outputs` relative to the manifest's directory;
// returns the paths that no longer match.
std::vector<std::string> verify_manifest_outputs(const RunManifest& manifest,
                                                 const std::filesystem::path& manifest_path);

inline constexpr const char* kBundleManifestName = "manifest.json";
inline constexpr const char* kCityLinksHeader = "lei,legalCityId,hqCityId";

// Serializes the store into `dir` (created if needed) and writes the
// manifest; command/parameters/inputs come from `manifest_stub`.
void write_bundle(const std::filesystem::path& dir, const GraphStore& store,
                  RunManifest manifest_stub);

// Rewrites citylinks.csv from the companies' links and refreshes the
// manifest's output digests.
void update_bundle_city_links(const std::filesystem::path& dir,
                              std::span<const Company> companies, const std::string& command,
                              const std::vector<std::string>& parameters,
                              const std::vector<ManifestEntry>& extra_inputs);

struct BundleLoad {
    GraphStore store;
    BuildReport report;
    RunManifest manifest;
};

// Parses the bundle CSVs and assembles the store. With verify_digests, any
// output digest mismatch throws BundleError (tamper evidence).
BundleLoad load_bundle(const std::filesystem::path& dir, bool verify_digests = true);

}  // namespace taxgraph
