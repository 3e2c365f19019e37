#include "sasm/cli.hpp"

#include "sasm/config.hpp"
#include "sasm/experiments.hpp"
#include "sasm/metrics.hpp"
#include "sasm/mot_io.hpp"
#include "sasm/simulator.hpp"
#include "sasm/tracker.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace sasm {

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> seed, epsilon, memory_len, alpha, policy, image_size, out;
  std::vector<std::string> sets;
};

void addCommon(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config, "flat key = value config file");
  cmd->add_option("--seed", f.seed, "scenario seed (base seed for multi-seed runs)");
  cmd->add_option("--epsilon", f.epsilon, "moving-distance threshold, normalized units");
  cmd->add_option("--memory-len", f.memory_len, "memory capacity per track");
  cmd->add_option("--alpha", f.alpha, "fusion weight of the current embedding");
  cmd->add_option("--policy", f.policy, "none|sparse|sparse+ofs|dense|delaying");
  cmd->add_option("--image-size", f.image_size, "image size WxH for pixel <-> unit conversion");
  cmd->add_option("-o,--out", f.out, "output directory");
  cmd->add_option("--set", f.sets, "extra key=value config override (repeatable)");
}

RunConfig resolveConfig(const CommonFlags &f, RunConfig cfg = {}) {
  if (!f.config.empty())
    applyConfigText(cfg, readFile(f.config));
  if (f.seed)
    applyConfigValue(cfg, "scenario.seed", *f.seed);
  if (f.epsilon)
    applyConfigValue(cfg, "memory.epsilon", *f.epsilon);
  if (f.memory_len)
    applyConfigValue(cfg, "memory.max_entries", *f.memory_len);
  if (f.alpha)
    applyConfigValue(cfg, "memory.alpha", *f.alpha);
  if (f.policy)
    applyConfigValue(cfg, "memory.policy", *f.policy);
  if (f.image_size)
    applyConfigValue(cfg, "run.image_size", *f.image_size);
  if (f.out)
    cfg.output_dir = *f.out;
  for (const auto &kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    applyConfigValue(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::optional<ImageSize> readSeqInfo(const fs::path &dir) {
  const fs::path ini = dir / "seqinfo.ini";
  if (!fs::exists(ini))
    return std::nullopt;
  std::istringstream in(readFile(ini));
  std::optional<double> w, h;
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    const std::string key = line.substr(0, eq);
    if (key == "imWidth")
      w = std::stod(line.substr(eq + 1));
    else if (key == "imHeight")
      h = std::stod(line.substr(eq + 1));
  }
  if (w && h)
    return ImageSize{*w, *h};
  return std::nullopt;
}

// Explicit flag, then seqinfo.ini beside the file, then an in-file header,
// then the configured default.
std::vector<MotFrame> loadMot(const fs::path &path, const CommonFlags &f, const RunConfig &cfg) {
  const std::string text = readFile(path);
  std::optional<ImageSize> size;
  if (f.image_size)
    size = cfg.image_size;
  else if (auto info = readSeqInfo(path.parent_path().empty() ? fs::path(".") : path.parent_path()))
    size = info;
  else if (text.find("# image-size") == std::string::npos)
    size = cfg.image_size;
  try {
    return parseMotFile(text, size);
  } catch (const std::exception &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string seqInfo(const RunConfig &cfg) {
  std::ostringstream s;
  s << "[Sequence]\n"
    << "name=sasm-sim-" << cfg.scenario.seed << "\n"
    << "frameRate=30\n"
    << "seqLength=" << cfg.scenario.n_frames << "\n"
    << "imWidth=" << cfg.image_size.width << "\n"
    << "imHeight=" << cfg.image_size.height << "\n";
  return s.str();
}

int cmdSimulate(const CommonFlags &f, std::optional<int> objects, std::optional<int> frames,
                std::ostream &out) {
  RunConfig cfg = resolveConfig(f);
  if (objects)
    cfg.scenario.n_objects = *objects;
  if (frames)
    cfg.scenario.n_frames = *frames;
  cfg.validate();
  const Scenario sc = generateScenario(cfg.scenario);
  const fs::path dir = cfg.output_dir;
  writeFile(dir / "gt.txt", writeMotFile(gtRows(sc), cfg.image_size));
  writeFile(dir / "det.txt", writeMotFile(detectionRows(sc), cfg.image_size));
  writeFile(dir / "embeddings.csv", writeEmbeddingFile(embeddingRows(sc)));
  writeFile(dir / "seqinfo.ini", seqInfo(cfg));
  writeFile(dir / "config.txt", dumpConfig(cfg));
  out << "wrote " << cfg.scenario.n_frames << " frames, " << cfg.scenario.n_objects
      << " objects to " << dir.string() << "\n";
  return 0;
}

int cmdTrack(const CommonFlags &f, const std::string &detPath, std::string embPath,
             std::ostream &out) {
  const RunConfig cfg = resolveConfig(f);
  if (embPath.empty())
    embPath = (fs::path(detPath).parent_path() / "embeddings.csv").string();
  const auto dets = loadMot(detPath, f, cfg);
  const auto embeddings = parseEmbeddingFile(readFile(embPath));
  if (!embeddings.empty() && embeddings.front().values.size() != cfg.tracker.memory.embedding_dim)
    throw std::invalid_argument("embedding dimension " +
                                std::to_string(embeddings.front().values.size()) +
                                " does not match configured " +
                                std::to_string(cfg.tracker.memory.embedding_dim) +
                                " (set scenario.embedding_dim)");
  const auto results = runTracker(joinDetections(dets, embeddings), cfg.tracker);
  std::optional<ImageSize> size = f.image_size ? std::optional(cfg.image_size)
                                               : readSeqInfo(fs::path(detPath).parent_path());
  const fs::path target = cfg.output_dir / "results.txt";
  writeFile(target, writeMotFile(resultRows(results), size.value_or(cfg.image_size)));
  out << "policy " << toString(cfg.tracker.memory.policy) << ": wrote " << target.string()
      << "\n";
  return 0;
}

int cmdEval(const CommonFlags &f, const std::string &gtPath, const std::string &predPath,
            std::ostream &out) {
  const RunConfig cfg = resolveConfig(f);
  const auto gt = toSequence(loadMot(gtPath, f, cfg));
  const auto pred = toSequence(loadMot(predPath, f, cfg));
  const MetricsReport r = evaluate(alignSequences(gt, pred));
  const std::vector<std::pair<std::string, MetricsReport>> rows = {{"result", r}};
  const std::string md = reportMarkdown(rows);
  const std::string csv = reportCsvHeader() + reportCsvRow("result", r);
  out << md;
  if (f.out) {
    writeFile(cfg.output_dir / "report.md", md);
    writeFile(cfg.output_dir / "report.csv", csv);
  }
  return 0;
}

int cmdExperiment(const std::string &name, const CommonFlags &f, std::optional<int> seeds,
                  std::ostream &out) {
  RunConfig base;
  base.scenario = rotationHeavyScenario();
  RunConfig cfg = resolveConfig(f, base);
  if (seeds)
    cfg.n_seeds = *seeds;
  cfg.validate();

  std::vector<Variant> variants;
  std::vector<int> reference;
  if (name == "ablate") {
    variants = ablationVariants(cfg.tracker);
    reference = {-1, 0, 1};
  } else if (name == "design") {
    variants = designVariants(cfg.tracker);
    reference = {-1, 0, -1, 2};
  } else {
    variants = sweepVariants(cfg.tracker);
    reference.assign(variants.size(), -1);
  }
  const VariantResults results = runVariants(cfg.scenario, variants, cfg.n_seeds, threadCount());

  std::ostringstream report;
  report << "# " << name << ": " << cfg.n_seeds << " seeds from " << cfg.scenario.seed << ", "
         << cfg.scenario.n_objects << " objects x " << cfg.scenario.n_frames << " frames\n";
  report << "# HOTA uses pure IoU-maximal matching per threshold\n\n";
  if (name == "sweep") {
    report << "## Moving threshold (epsilon)\n\n"
           << comparisonTable(std::span(variants).first(std::size(kSweepEpsilons)),
                              VariantResults(results.begin(),
                                             results.begin() + std::size(kSweepEpsilons)),
                              std::span(reference).first(std::size(kSweepEpsilons)))
           << "\n## Memory length (# features)\n\n"
           << comparisonTable(std::span(variants).subspan(std::size(kSweepEpsilons)),
                              VariantResults(results.begin() + std::size(kSweepEpsilons),
                                             results.end()),
                              std::span(reference).subspan(std::size(kSweepEpsilons)));
  } else {
    report << comparisonTable(variants, results, reference) << "\n";
    const Metric all[] = {Metric::Hota, Metric::AssA, Metric::Idf1};
    if (name == "ablate") {
      report << signTestLines(variants, results, 1, 0, all);
      report << signTestLines(variants, results, 2, 1, all);
    } else {
      report << signTestLines(variants, results, 1, 0, all);
      report << signTestLines(variants, results, 3, 2, all);
    }
  }
  out << report.str();
  if (f.out) {
    writeFile(cfg.output_dir / (name + ".md"), report.str());
    writeFile(cfg.output_dir / (name + ".csv"), resultsCsv(variants, results, cfg.scenario.seed));
  }
  return 0;
}

} // namespace

int runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Sparse spatial memory multi-object tracking toolkit", "sasm"};
  app.require_subcommand(1);

  CommonFlags simF, trackF, evalF, ablateF, designF, sweepF;
  std::optional<int> objects, frames, ablateSeeds, designSeeds, sweepSeeds;
  std::string detPath, embPath, gtPath, predPath;

  auto *sim = app.add_subcommand("simulate", "generate a synthetic scenario");
  addCommon(sim, simF);
  sim->add_option("--objects", objects, "number of objects");
  sim->add_option("--frames", frames, "number of frames");

  auto *track = app.add_subcommand("track", "run the tracker on detections + embeddings");
  addCommon(track, trackF);
  track->add_option("--det", detPath, "MOTChallenge detection file")->required();
  track->add_option("--embeddings", embPath, "embedding sidecar (default: beside --det)");

  auto *eval = app.add_subcommand("eval", "score predictions against ground truth");
  addCommon(eval, evalF);
  eval->add_option("--gt", gtPath, "ground truth MOT file")->required();
  eval->add_option("--pred", predPath, "tracker output MOT file")->required();

  auto *ablate = app.add_subcommand("ablate", "baseline vs +SASM vs +SASM+OFS");
  addCommon(ablate, ablateF);
  ablate->add_option("--seeds", ablateSeeds, "number of seeded scenarios");
  auto *design = app.add_subcommand("design", "dense vs sparse, delaying vs OFS");
  addCommon(design, designF);
  design->add_option("--seeds", designSeeds, "number of seeded scenarios");
  auto *sweep = app.add_subcommand("sweep", "moving threshold and memory length grids");
  addCommon(sweep, sweepF);
  sweep->add_option("--seeds", sweepSeeds, "number of seeded scenarios");

  std::vector<char *> argv;
  std::vector<std::string> storage(args);
  if (storage.empty())
    storage.emplace_back("sasm");
  for (auto &a : storage)
    argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    if (e.get_exit_code() == 0)
      return 1;
    return e.get_exit_code();
  }

  try {
    if (*sim)
      return cmdSimulate(simF, objects, frames, out);
    if (*track)
      return cmdTrack(trackF, detPath, embPath, out);
    if (*eval)
      return cmdEval(evalF, gtPath, predPath, out);
    if (*ablate)
      return cmdExperiment("ablate", ablateF, ablateSeeds, out);
    if (*design)
      return cmdExperiment("design", designF, designSeeds, out);
    if (*sweep)
      return cmdExperiment("sweep", sweepF, sweepSeeds, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

} // namespace sasm
