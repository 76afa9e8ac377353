#include "varmatch/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "varmatch/error.hpp"

namespace varmatch {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_ref(std::string& out, const char* side, const PatchRef& ref) {
  const std::string p = std::string("\"") + side + "_";
  out += p + "image\":" + nlohmann::json(ref.image_id).dump();
  out += "," + p + "x\":" + std::to_string(ref.x);
  out += "," + p + "y\":" + std::to_string(ref.y);
  out += "," + p + "size\":" + std::to_string(ref.size);
  out += "," + p + "mean\":" + g17(ref.mean);
  out += "," + p + "var\":" + g17(ref.variance);
}

PatchRef read_ref(const nlohmann::json& j, const std::string& side) {
  PatchRef ref;
  ref.image_id = j.at(side + "_image").get<std::string>();
  ref.x = j.at(side + "_x").get<int>();
  ref.y = j.at(side + "_y").get<int>();
  ref.size = j.at(side + "_size").get<int>();
  ref.mean = j.at(side + "_mean").get<double>();
  ref.variance = j.at(side + "_var").get<double>();
  return ref;
}

}  // namespace

std::string format_manifest_line(const PatchPair& pair) {
  std::string line = "{";
  append_ref(line, "lr", pair.lr);
  line += ",";
  append_ref(line, "hr", pair.hr);
  line += "}";
  return line;
}

PatchPair parse_manifest_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    if (!j.is_object() || j.size() != 12) {
      throw Error(Errc::format_error, "manifest record must have exactly 12 fields");
    }
    return {read_ref(j, "lr"), read_ref(j, "hr")};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::format_error, std::string("bad manifest record: ") + e.what());
  }
}

void write_manifest(std::ostream& out, std::span<const PatchPair> pairs) {
  for (const auto& pair : pairs) out << format_manifest_line(pair) << '\n';
}

void export_manifest(const PairBatch& batch, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  write_manifest(out, batch.pairs);
  out.flush();
  if (!out) throw Error(Errc::io_error, "write failed: " + path.string());
}

std::vector<PatchPair> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::vector<PatchPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    pairs.push_back(parse_manifest_line(line));
  }
  return pairs;
}

ManifestCheck verify_manifest(std::span<const PatchPair> pairs, const Corpus& lr_corpus,
                              const Corpus& hr_corpus, double sigma_t_sq,
                              std::optional<double> mu_t) {
  auto recompute_matches = [](const Corpus& corpus, const PatchRef& ref) {
    const CorpusEntry* entry = corpus.find(ref.image_id);
    if (!entry) throw Error(Errc::image_not_found, ref.image_id);
    const PatchStats st = patch_stats(entry->table, ref.x, ref.y, ref.size, ref.size);
    return st.mean == ref.mean && st.variance == ref.variance;
  };
  ManifestCheck check;
  for (const auto& pair : pairs) {
    ++check.records;
    const bool lr_ok = recompute_matches(lr_corpus, pair.lr);
    const bool hr_ok = recompute_matches(hr_corpus, pair.hr);
    if (!lr_ok || !hr_ok) ++check.stats_mismatches;
    if (!admissible(pair.lr, pair.hr, sigma_t_sq, mu_t)) ++check.constraint_violations;
  }
  return check;
}

}  // namespace varmatch
