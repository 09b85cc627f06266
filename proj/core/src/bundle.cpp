#include "taxgraph/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "taxgraph/csv.hpp"
#include "taxgraph/sha256.hpp"
#include "taxgraph/version.hpp"

namespace taxgraph {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kBundleFiles[] = {"entities.csv", "relationships.csv", "indicators.csv",
                                        "legalforms.csv"};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

void write_city_links_csv(std::span<const Company> companies, std::ostream& out) {
    out << kCityLinksHeader << '\n';
    std::vector<std::string> row(3);
    for (const Company& c : companies) {
        if (c.legal_city_link.empty() && c.hq_city_link.empty()) continue;
        row[0] = c.lei.str();
        row[1] = c.legal_city_link;
        row[2] = c.hq_city_link;
        write_csv_row(out, row);
    }
}

std::vector<ManifestEntry> digest_files(const fs::path& dir,
                                        const std::vector<std::string>& names) {
    std::vector<ManifestEntry> entries;
    entries.reserve(names.size());
    for (const std::string& name : names) {
        entries.push_back({name, sha256_file(dir / name)});
    }
    return entries;
}

}  // namespace

std::string sha256_file(const fs::path& path) { return sha256_hex(slurp(path)); }

void write_manifest(const RunManifest& manifest, const fs::path& path) {
    ordered_json doc;
    doc["tool"] = manifest.tool;
    doc["version"] = manifest.version;
    doc["command"] = manifest.command;
    doc["parameters"] = manifest.parameters;
    auto entry_array = [](const std::vector<ManifestEntry>& entries) {
        ordered_json array = ordered_json::array();
        for (const ManifestEntry& e : entries) {
            array.push_back(ordered_json{{"path", e.path}, {"sha256", e.sha256}});
        }
        return array;
    };
    doc["inputs"] = entry_array(manifest.inputs);
    doc["outputs"] = entry_array(manifest.outputs);
    spit(path, doc.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(slurp(path));
    } catch (const std::exception& e) {
        throw BundleError("bad manifest " + path.string() + ": " + e.what());
    }
    RunManifest manifest;
    try {
        manifest.tool = doc.at("tool").get<std::string>();
        manifest.version = doc.at("version").get<std::string>();
        manifest.command = doc.at("command").get<std::string>();
        for (const auto& p : doc.at("parameters")) {
            manifest.parameters.push_back(p.get<std::string>());
        }
        for (const char* section : {"inputs", "outputs"}) {
            auto& target = std::string(section) == "inputs" ? manifest.inputs : manifest.outputs;
            for (const auto& entry : doc.at(section)) {
                target.push_back({entry.at("path").get<std::string>(),
                                  entry.at("sha256").get<std::string>()});
            }
        }
    } catch (const std::exception& e) {
        throw BundleError("bad manifest " + path.string() + ": " + e.what());
    }
    return manifest;
}

std::vector<std::string> verify_manifest_outputs(const RunManifest& manifest,
                                                 const fs::path& manifest_path) {
    std::vector<std::string> mismatched;
    fs::path dir = manifest_path.parent_path();
    for (const ManifestEntry& entry : manifest.outputs) {
        fs::path file = dir / entry.path;
        if (!fs::exists(file) || sha256_file(file) != entry.sha256) {
            mismatched.push_back(entry.path);
        }
    }
    return mismatched;
}

void write_bundle(const fs::path& dir, const GraphStore& store, RunManifest manifest_stub) {
    fs::create_directories(dir);
    {
        std::ostringstream out;
        write_entities_csv(store, out);
        spit(dir / "entities.csv", out.str());
    }
    {
        std::ostringstream out;
        write_relationships_csv(store, out);
        spit(dir / "relationships.csv", out.str());
    }
    {
        std::ostringstream out;
        write_indicators_csv(store, out);
        spit(dir / "indicators.csv", out.str());
    }
    {
        std::ostringstream out;
        write_legal_forms_csv(store, out);
        spit(dir / "legalforms.csv", out.str());
    }
    std::vector<std::string> names(std::begin(kBundleFiles), std::end(kBundleFiles));
    manifest_stub.tool = kToolName;
    manifest_stub.version = kToolVersion;
    manifest_stub.outputs = digest_files(dir, names);
    write_manifest(manifest_stub, dir / kBundleManifestName);
}

void update_bundle_city_links(const fs::path& dir, std::span<const Company> companies,
                              const std::string& command,
                              const std::vector<std::string>& parameters,
                              const std::vector<ManifestEntry>& extra_inputs) {
    RunManifest manifest = read_manifest(dir / kBundleManifestName);
    {
        std::ostringstream out;
        write_city_links_csv(companies, out);
        spit(dir / "citylinks.csv", out.str());
    }
    manifest.command = command;
    manifest.parameters = parameters;
    for (const ManifestEntry& e : extra_inputs) manifest.inputs.push_back(e);

    std::vector<std::string> names(std::begin(kBundleFiles), std::end(kBundleFiles));
    names.emplace_back("citylinks.csv");
    manifest.outputs = digest_files(dir, names);
    write_manifest(manifest, dir / kBundleManifestName);
}

BundleLoad load_bundle(const fs::path& dir, bool verify_digests) {
    fs::path manifest_path = dir / kBundleManifestName;
    if (!fs::exists(manifest_path)) {
        throw BundleError("not a graph bundle (missing manifest): " + dir.string());
    }
    RunManifest manifest = read_manifest(manifest_path);
    if (verify_digests) {
        std::vector<std::string> mismatched = verify_manifest_outputs(manifest, manifest_path);
        if (!mismatched.empty()) {
            std::string joined;
            for (const std::string& name : mismatched) {
                if (!joined.empty()) joined += ", ";
                joined += name;
            }
            throw BundleError("bundle digest mismatch (tampered or corrupt): " + joined);
        }
    }
    for (const char* name : kBundleFiles) {
        if (!fs::exists(dir / name)) {
            throw BundleError("bundle missing " + std::string(name));
        }
    }

    EntitiesParse entities = parse_entities(slurp(dir / "entities.csv"));
    RelationshipsParse relationships = parse_relationships(slurp(dir / "relationships.csv"));
    IndicatorsParse indicators = parse_indicators(slurp(dir / "indicators.csv"));
    LegalFormsParse legal_forms = parse_legal_forms(slurp(dir / "legalforms.csv"));

    // Optional city links, applied before assembly.
    fs::path links_path = dir / "citylinks.csv";
    if (fs::exists(links_path)) {
        std::string text = slurp(links_path);
        CsvReader reader(text);
        std::vector<std::string> f;
        if (!reader.read_record(f)) throw BundleError("citylinks.csv: missing header");
        std::map<std::string, std::pair<std::string, std::string>> links;
        while (reader.read_record(f)) {
            if (f.size() == 1 && f[0].empty()) continue;
            if (f.size() != 3) throw BundleError("citylinks.csv: bad row");
            links.emplace(f[0], std::make_pair(f[1], f[2]));
        }
        for (Company& c : entities.companies) {
            auto it = links.find(c.lei.str());
            if (it != links.end()) {
                c.legal_city_link = it->second.first;
                c.hq_city_link = it->second.second;
            }
        }
    }

    BuildResult built = build_graph(std::move(entities.companies), std::move(relationships.edges),
                                    std::move(indicators.indicators),
                                    std::move(legal_forms.names));
    built.report.self_loops_dropped += relationships.self_loops_dropped;
    built.report.entity_errors = std::move(entities.errors);
    built.report.relationship_errors = std::move(relationships.errors);
    built.report.indicator_errors = std::move(indicators.errors);
    built.report.legal_form_errors = std::move(legal_forms.errors);

    return {std::move(built.store), std::move(built.report), std::move(manifest)};
}

}  // namespace taxgraph
