#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/inpaint.hpp"

namespace fs = std::filesystem;

#ifndef FDDB360_VERSION
#define FDDB360_VERSION "0.0.0"
#endif

namespace fddb360 {

namespace {

std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long parse_long(const std::string& value, const std::string& key) {
  long out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw_invalid("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(value, &pos);
    if (pos == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw_invalid("config: '" + key + "' expects a number, got '" + value + "'");
}

std::array<std::uint8_t, 3> parse_fill_color(const std::string& value) {
  if (value.size() != 6 ||
      !std::all_of(value.begin(), value.end(),
                   [](unsigned char c) { return std::isxdigit(c); })) {
    throw_invalid("config: fill_color expects RRGGBB hex, got '" + value + "'");
  }
  auto byte = [&](int i) {
    return static_cast<std::uint8_t>(
        std::stoi(value.substr(2 * i, 2), nullptr, 16));
  };
  return {byte(0), byte(1), byte(2)};
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<std::size_t>(workers, count);
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

std::string flatten_stem(const std::string& image_path) {
  std::string stem = image_path;
  const auto dot = stem.find_last_of('.');
  const auto slash = stem.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    stem.resize(dot);
  }
  std::replace(stem.begin(), stem.end(), '/', '_');
  return stem;
}

std::string resolve_image_path(const std::string& root,
                               const std::string& image_path) {
  const fs::path base = fs::path(root) / image_path;
  if (fs::exists(base)) return base.string();
  for (const char* ext : {".jpg", ".png", ".jpeg", ".ppm"}) {
    const fs::path candidate = fs::path(root) / (image_path + ext);
    if (fs::exists(candidate)) return candidate.string();
  }
  throw_io("image '" + image_path + "' not found under '" + root + "'");
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw_invalid("config: " + what + " is required");
  if (!fs::exists(path)) throw_invalid(what + " '" + path + "' does not exist");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF newlines
  if (!out) throw_io("cannot write '" + path.string() + "'");
  return out;
}

std::vector<ImageRecord> load_fddb_records(const PipelineConfig& config) {
  if (config.annotation_files.empty()) {
    throw_invalid("config: annotations is required");
  }
  if (config.annotation_files.size() > 10) {
    throw_invalid("config: at most 10 annotation files (folds) are supported");
  }
  std::map<std::string, int> fold_of_path;
  for (std::size_t i = 0; i < config.fold_lists.size(); ++i) {
    require_file(config.fold_lists[i], "fold list");
    std::ifstream in(config.fold_lists[i]);
    for (const std::string& path : parse_fold_list(in)) {
      fold_of_path[path] = static_cast<int>(i) + 1;
    }
  }
  std::vector<ImageRecord> records;
  for (std::size_t i = 0; i < config.annotation_files.size(); ++i) {
    require_file(config.annotation_files[i], "annotation file");
    std::ifstream in(config.annotation_files[i]);
    std::vector<ImageRecord> file_records;
    try {
      file_records = parse_fddb(in);
    } catch (const Error& e) {
      throw Error(e.code(),
                  config.annotation_files[i] + ": " + e.what());
    }
    for (ImageRecord& rec : file_records) {
      if (!fold_of_path.empty()) {
        const auto it = fold_of_path.find(rec.image_path);
        if (it == fold_of_path.end()) {
          throw_invalid("image '" + rec.image_path +
                        "' is not listed in any fold list");
        }
        rec.fold_id = it->second;
      } else {
        rec.fold_id = static_cast<int>(i) + 1;
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

struct SampleOut {
  std::string rel_path;  // relative to output_root
  int fold_id = 0;
  std::vector<RectFace> faces;
};

void write_fold_annotations(const fs::path& root,
                            const std::vector<SampleOut>& samples) {
  fs::create_directories(root / "annotations");
  std::map<int, std::vector<const SampleOut*>> by_fold;
  for (const SampleOut& s : samples) by_fold[s.fold_id].push_back(&s);
  for (const auto& [fold, list] : by_fold) {
    char name[32];
    std::snprintf(name, sizeof(name), "fold_%02d.txt", fold);
    std::ofstream out = open_out(root / "annotations" / name);
    for (const SampleOut* s : list) {
      write_rect_record(out, s->rel_path, s->faces);
    }
  }
  std::ofstream all = open_out(root / "annotations" / "all.txt");
  for (const SampleOut& s : samples) {
    write_rect_record(all, s.rel_path, s.faces);
  }
}

std::vector<std::pair<std::string, std::string>> snapshot_config(
    const PipelineConfig& config) {
  // jobs and output paths are execution details: two runs that differ only
  // in them must still produce byte-identical manifests.
  std::vector<std::pair<std::string, std::string>> snap;
  auto add = [&](const char* k, const std::string& v) {
    if (!v.empty()) snap.emplace_back(k, v);
  };
  add("input_image_root", config.input_image_root);
  std::string files;
  for (const std::string& f : config.annotation_files) {
    files += (files.empty() ? "" : ";") + f;
  }
  add("annotations", files);
  std::string folds;
  for (const std::string& f : config.fold_lists) {
    folds += (folds.empty() ? "" : ";") + f;
  }
  add("fold_lists", folds);
  snap.emplace_back("patch_radius", std::to_string(config.patch_radius));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", config.exclusion_penalty);
  snap.emplace_back("exclusion_penalty", buf);
  std::snprintf(buf, sizeof(buf), "%02x%02x%02x", config.fill_color[0],
                config.fill_color[1], config.fill_color[2]);
  snap.emplace_back("fill_color", buf);
  snap.emplace_back("seed", std::to_string(config.seed));
  return snap;
}

}  // namespace

const char* augment_op_name(AugmentOp op) {
  switch (op) {
    case AugmentOp::hflip: return "hflip";
    case AugmentOp::rot90: return "rot90";
    case AugmentOp::rot180: return "rot180";
    case AugmentOp::rot270: return "rot270";
  }
  return "?";
}

AugmentOp augment_op_from_name(const std::string& name) {
  if (name == "hflip") return AugmentOp::hflip;
  if (name == "rot90") return AugmentOp::rot90;
  if (name == "rot180") return AugmentOp::rot180;
  if (name == "rot270") return AugmentOp::rot270;
  throw_invalid("unknown augmentation '" + name +
                "' (rotations other than 90/180/270 are not supported)");
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "input_image_root") {
    input_image_root = value;
  } else if (key == "annotations") {
    annotation_files = split_list(value, ';');
  } else if (key == "fold_lists") {
    fold_lists = split_list(value, ';');
  } else if (key == "output_root") {
    output_root = value;
  } else if (key == "patch_radius") {
    patch_radius = static_cast<int>(parse_long(value, key));
    if (patch_radius < 1) throw_invalid("config: patch_radius must be >= 1");
  } else if (key == "exclusion_penalty") {
    exclusion_penalty = parse_double(value, key);
  } else if (key == "fill_color") {
    fill_color = parse_fill_color(value);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_long(value, key));
  } else if (key == "jobs") {
    worker_count = static_cast<int>(parse_long(value, key));
    if (worker_count < 1) throw_invalid("config: jobs must be >= 1");
  } else if (key == "debug_dir") {
    debug_dir = value;
  } else if (key == "input_root") {
    input_root = value;
  } else if (key == "augmentations") {
    augmentations.clear();
    for (const std::string& name : split_list(value, ',')) {
      augmentations.push_back(augment_op_from_name(name));
    }
  } else if (key == "random_pick") {
    random_pick = value == "1" || value == "true";
  } else if (key == "ground_truth") {
    ground_truth = value;
  } else if (key == "detections") {
    detections = value;
  } else if (key == "iou_threshold") {
    iou_threshold = parse_double(value, key);
    if (iou_threshold < 0.0 || iou_threshold > 1.0) {
      throw_invalid("config: iou_threshold must be in [0,1]");
    }
  } else if (key == "score_threshold") {
    score_threshold = parse_double(value, key);
  } else if (key == "image_root") {
    image_root = value;
  } else {
    throw_invalid("config: unknown key '" + key + "'");
  }
}

void PipelineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r\n");
    line = line.substr(b, e - b + 1);
    const auto sep = line.find_first_of(" \t=");
    if (sep == std::string::npos) {
      throw_parse("expected 'key value' or 'key=value'", line_no);
    }
    const std::string key = line.substr(0, sep);
    std::string value = line.substr(sep + 1);
    auto vb = value.find_first_not_of(" \t");
    if (vb != std::string::npos && value[vb] == '=' && line[sep] != '=') {
      vb = value.find_first_not_of(" \t", vb + 1);  // "key = value" form
    }
    value = vb == std::string::npos ? "" : value.substr(vb);
    set(key, value);
  }
}

long RunManifest::total_images() const {
  long n = 0;
  for (const ManifestEntry& e : entries) n += e.images;
  return n;
}

long RunManifest::total_faces() const {
  long n = 0;
  for (const ManifestEntry& e : entries) n += e.faces;
  return n;
}

long RunManifest::failure_count() const {
  return static_cast<long>(
      std::count_if(entries.begin(), entries.end(),
                    [](const ManifestEntry& e) { return !e.ok; }));
}

void write_manifest(std::ostream& out, const RunManifest& manifest) {
  out << "fddb360-manifest 1\n";
  out << "tool_version " << manifest.tool_version << "\n";
  for (const auto& [key, value] : manifest.config_snapshot) {
    out << "config " << key << " " << value << "\n";
  }
  for (const ManifestEntry& e : manifest.entries) {
    out << "image " << e.image_path << " fold " << e.fold_id << " ";
    if (e.ok) {
      out << "ok images " << e.images << " faces " << e.faces << "\n";
    } else {
      out << "excluded " << e.reason << "\n";
    }
  }
  out << "totals images " << manifest.total_images() << " faces "
      << manifest.total_faces() << "\n";
  if (!out) throw_io("write_manifest: stream failure");
}

RunManifest parse_manifest(std::istream& in) {
  RunManifest manifest;
  std::string line;
  int line_no = 0;
  bool saw_totals = false;
  long total_images = 0, total_faces = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (line_no == 1) {
      std::string version;
      ss >> version;
      if (tag != "fddb360-manifest" || version != "1") {
        throw_parse("not a manifest file", line_no);
      }
      continue;
    }
    if (tag == "tool_version") {
      ss >> manifest.tool_version;
    } else if (tag == "config") {
      std::string key, value;
      ss >> key;
      std::getline(ss, value);
      const auto b = value.find_first_not_of(' ');
      manifest.config_snapshot.emplace_back(
          key, b == std::string::npos ? "" : value.substr(b));
    } else if (tag == "image") {
      ManifestEntry e;
      std::string kw, status;
      if (!(ss >> e.image_path >> kw >> e.fold_id >> status) || kw != "fold") {
        throw_parse("malformed image line", line_no);
      }
      if (status == "ok") {
        std::string kw_images, kw_faces;
        if (!(ss >> kw_images >> e.images >> kw_faces >> e.faces) ||
            kw_images != "images" || kw_faces != "faces") {
          throw_parse("malformed image totals", line_no);
        }
        e.ok = true;
      } else if (status == "excluded") {
        std::getline(ss, e.reason);
        const auto b = e.reason.find_first_not_of(' ');
        e.reason = b == std::string::npos ? "" : e.reason.substr(b);
        e.ok = false;
      } else {
        throw_parse("unknown image status '" + status + "'", line_no);
      }
      manifest.entries.push_back(std::move(e));
    } else if (tag == "totals") {
      std::string kw_images, kw_faces;
      if (!(ss >> kw_images >> total_images >> kw_faces >> total_faces) ||
          kw_images != "images" || kw_faces != "faces") {
        throw_parse("malformed totals line", line_no);
      }
      saw_totals = true;
    } else {
      throw_parse("unknown manifest tag '" + tag + "'", line_no);
    }
  }
  if (!saw_totals) {
    throw Error(ErrorCode::parse, "manifest: missing totals line");
  }
  if (total_images != manifest.total_images() ||
      total_faces != manifest.total_faces()) {
    throw Error(ErrorCode::parse,
                "manifest: totals do not match the per-image entries");
  }
  return manifest;
}

RunManifest run_synthesis(const PipelineConfig& config) {
  if (config.output_root.empty()) throw_invalid("config: output_root is required");
  if (config.input_image_root.empty()) {
    throw_invalid("config: input_image_root is required");
  }
  if (!fs::exists(config.input_image_root)) {
    throw_invalid("input_image_root '" + config.input_image_root +
                  "' does not exist");
  }
  const std::vector<ImageRecord> records = load_fddb_records(config);

  const fs::path root(config.output_root);
  fs::create_directories(root / "images");
  if (!config.debug_dir.empty()) fs::create_directories(config.debug_dir);

  struct PerImage {
    ManifestEntry entry;
    std::vector<SampleOut> samples;
  };
  std::vector<PerImage> results(records.size());

  parallel_for(records.size(), config.worker_count, [&](std::size_t i) {
    const ImageRecord& rec = records[i];
    PerImage& out = results[i];
    out.entry.image_path = rec.image_path;
    out.entry.fold_id = rec.fold_id;
    try {
      const std::string path =
          resolve_image_path(config.input_image_root, rec.image_path);
      const ImageBuffer img = read_image(path);

      std::vector<RectFace> rects;
      rects.reserve(rec.ellipses.size());
      for (const EllipseFace& e : rec.ellipses) {
        rects.push_back(ellipse_to_rect(e));
      }

      ExtendOptions ext_opts;
      ext_opts.patch_radius = config.patch_radius;
      ext_opts.exclusion_penalty = config.exclusion_penalty;
      if (!config.debug_dir.empty()) {
        const fs::path dir =
            fs::path(config.debug_dir) / flatten_stem(rec.image_path);
        fs::create_directories(dir);
        ext_opts.debug_dir = dir.string();
      }
      const ExtendedImage ext = extend_image(img, rects, ext_opts);

      RenderOptions render_opts;
      render_opts.fill_color = config.fill_color;
      const std::vector<CircularSample> samples =
          synthesize(ext, rec.image_path, render_opts);

      const std::string stem = flatten_stem(rec.image_path);
      for (const CircularSample& sample : samples) {
        SampleOut s;
        s.rel_path =
            "images/" + stem + "_p" + std::to_string(sample.patch_index) + ".png";
        s.fold_id = rec.fold_id;
        s.faces = sample.faces;
        write_png((root / s.rel_path).string(), sample.image);
        out.entry.faces += static_cast<long>(sample.faces.size());
        out.samples.push_back(std::move(s));
      }
      out.entry.images = static_cast<long>(samples.size());
      out.entry.ok = true;
    } catch (const std::exception& e) {
      out.entry.ok = false;
      out.entry.images = 0;
      out.entry.faces = 0;
      out.entry.reason = e.what();
      out.samples.clear();
    }
  });

  RunManifest manifest;
  manifest.tool_version = FDDB360_VERSION;
  manifest.config_snapshot = snapshot_config(config);
  std::vector<SampleOut> all_samples;
  for (PerImage& r : results) {
    manifest.entries.push_back(std::move(r.entry));
    for (SampleOut& s : r.samples) all_samples.push_back(std::move(s));
  }
  write_fold_annotations(root, all_samples);
  std::ofstream mf = open_out(root / "manifest.txt");
  write_manifest(mf, manifest);
  return manifest;
}

CircularSample augment(const CircularSample& sample, AugmentOp op) {
  const ImageBuffer& in = sample.image;
  if (in.width != in.height) {
    throw_invalid("augment: sample image must be square");
  }
  const int s = in.width;
  CircularSample out = sample;
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      int sc = c, sr = r;
      switch (op) {
        case AugmentOp::hflip: sc = s - 1 - c; sr = r; break;
        case AugmentOp::rot90: sc = r; sr = s - 1 - c; break;
        case AugmentOp::rot180: sc = s - 1 - c; sr = s - 1 - r; break;
        case AugmentOp::rot270: sc = s - 1 - r; sr = c; break;
      }
      for (int ch = 0; ch < in.channels; ++ch) {
        out.image.at(c, r, ch) = in.at(sc, sr, ch);
      }
    }
  }
  const double side = s;
  for (std::size_t i = 0; i < sample.faces.size(); ++i) {
    const RectFace& f = sample.faces[i];
    RectFace& g = out.faces[i];
    switch (op) {
      case AugmentOp::hflip: g = {side - f.x - f.w, f.y, f.w, f.h}; break;
      case AugmentOp::rot90: g = {side - f.y - f.h, f.x, f.h, f.w}; break;
      case AugmentOp::rot180:
        g = {side - f.x - f.w, side - f.y - f.h, f.w, f.h};
        break;
      case AugmentOp::rot270: g = {f.y, side - f.x - f.w, f.h, f.w}; break;
    }
  }
  return out;
}

namespace {

// Per-fold rect annotations of a synthesized (or augmented) dataset root.
std::vector<ImageRecord> load_dataset_records(const std::string& input_root,
                                              bool require_all_folds) {
  if (input_root.empty()) throw_invalid("config: input_root is required");
  std::vector<ImageRecord> records;
  int found = 0;
  for (int fold = 1; fold <= 10; ++fold) {
    char name[32];
    std::snprintf(name, sizeof(name), "fold_%02d.txt", fold);
    const fs::path path = fs::path(input_root) / "annotations" / name;
    if (!fs::exists(path)) {
      if (require_all_folds) {
        throw_invalid("missing fold annotations '" + path.string() + "'");
      }
      continue;
    }
    ++found;
    std::ifstream in(path);
    std::vector<ImageRecord> fold_records = parse_rect(in);
    for (ImageRecord& rec : fold_records) {
      rec.fold_id = fold;
      records.push_back(std::move(rec));
    }
  }
  if (found == 0) {
    throw_invalid("no fold annotations under '" + input_root +
                  "/annotations'");
  }
  return records;
}

}  // namespace

RunResult run_augment(const PipelineConfig& config) {
  if (config.output_root.empty()) throw_invalid("config: output_root is required");
  if (config.augmentations.empty()) {
    throw_invalid("config: augmentations is required");
  }
  const std::vector<ImageRecord> records =
      load_dataset_records(config.input_root, false);

  const fs::path in_root(config.input_root);
  const fs::path out_root(config.output_root);
  fs::create_directories(out_root / "images");

  struct PerRecord {
    std::vector<SampleOut> samples;
    std::string error;
  };
  std::vector<PerRecord> results(records.size());

  parallel_for(records.size(), config.worker_count, [&](std::size_t i) {
    const ImageRecord& rec = records[i];
    PerRecord& out = results[i];
    try {
      CircularSample sample;
      sample.image = read_image((in_root / rec.image_path).string());
      sample.faces = rec.rects;

      std::vector<AugmentOp> ops = config.augmentations;
      if (config.random_pick) {
        const std::uint64_t r =
            splitmix64(config.seed ^ fnv1a(rec.image_path));
        ops = {config.augmentations[r % config.augmentations.size()]};
      }
      // Synthesized datasets keep a flat images/ directory, so the filename
      // stem is already unique.
      const std::string stem = fs::path(rec.image_path).stem().string();
      for (const AugmentOp op : ops) {
        const CircularSample aug = augment(sample, op);
        SampleOut s;
        s.rel_path = "images/" + stem + "_" + augment_op_name(op) + ".png";
        s.fold_id = rec.fold_id;
        s.faces = aug.faces;
        write_png((out_root / s.rel_path).string(), aug.image);
        out.samples.push_back(std::move(s));
      }
    } catch (const std::exception& e) {
      out.samples.clear();
      out.error = e.what();
    }
  });

  RunResult result;
  std::vector<SampleOut> all_samples;
  for (PerRecord& r : results) {
    if (!r.error.empty()) {
      ++result.failures;
      continue;
    }
    for (SampleOut& s : r.samples) {
      result.images += 1;
      result.faces += static_cast<long>(s.faces.size());
      all_samples.push_back(std::move(s));
    }
  }
  write_fold_annotations(out_root, all_samples);
  return result;
}

RunResult run_folds(const PipelineConfig& config) {
  if (config.output_root.empty()) throw_invalid("config: output_root is required");
  const std::vector<ImageRecord> records =
      load_dataset_records(config.input_root, true);
  const std::vector<FoldSplit> splits = fold_split(records);

  const fs::path out_dir = fs::path(config.output_root) / "folds";
  fs::create_directories(out_dir);
  RunResult result;
  for (std::size_t k = 0; k < splits.size(); ++k) {
    char train_name[32], test_name[32];
    std::snprintf(train_name, sizeof(train_name), "split_%zu_train.txt", k + 1);
    std::snprintf(test_name, sizeof(test_name), "split_%zu_test.txt", k + 1);
    std::ofstream train = open_out(out_dir / train_name);
    std::ofstream test = open_out(out_dir / test_name);
    for (const ImageRecord* rec : splits[k].train) {
      write_rect_record(train, rec->image_path, rec->rects);
    }
    for (const ImageRecord* rec : splits[k].test) {
      write_rect_record(test, rec->image_path, rec->rects);
    }
  }
  result.images = static_cast<long>(records.size());
  for (const ImageRecord& rec : records) {
    result.faces += static_cast<long>(rec.rects.size());
  }
  return result;
}

RunResult run_evaluate(const PipelineConfig& config) {
  require_file(config.ground_truth, "ground_truth");
  require_file(config.detections, "detections");
  if (config.output_root.empty()) throw_invalid("config: output_root is required");

  std::ifstream gt_in(config.ground_truth);
  const std::vector<ImageRecord> gt = parse_rect(gt_in);
  std::ifstream det_in(config.detections);
  const std::vector<Detection> dets = parse_detections(det_in);

  const SweepInput input = label_dataset(gt, dets, config.iou_threshold);
  const PrResult pr = pr_curve(input);
  const EvalCurve roc = discrete_roc(input);

  const fs::path out_dir(config.output_root);
  fs::create_directories(out_dir);
  std::ofstream pr_out = open_out(out_dir / "pr_curve.csv");
  write_curve_csv(pr_out, pr.curve);
  std::ofstream roc_out = open_out(out_dir / "discrete_roc.csv");
  write_curve_csv(roc_out, roc);

  if (!config.image_root.empty()) {
    std::vector<std::pair<std::string, double>> sides;
    for (const ImageRecord& rec : gt) {
      const auto [w, h] =
          read_image_size((fs::path(config.image_root) / rec.image_path).string());
      sides.emplace_back(rec.image_path, static_cast<double>(std::max(w, h)));
    }
    const std::vector<FNPoint> misses = fn_scatter(
        gt, dets, sides, config.iou_threshold, config.score_threshold);
    std::ofstream fn_out = open_out(out_dir / "fn_scatter.csv");
    write_fn_csv(fn_out, misses);
  }

  RunResult result;
  result.images = static_cast<long>(gt.size());
  for (const ImageRecord& rec : gt) {
    result.faces += static_cast<long>(rec.rects.size());
  }
  result.auc = pr.auc;
  return result;
}

RunResult manifest_summary(const RunManifest& manifest) {
  RunResult result;
  result.images = manifest.total_images();
  result.faces = manifest.total_faces();
  result.failures = manifest.failure_count();
  return result;
}

}  // namespace fddb360
