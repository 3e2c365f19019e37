#include "sasm/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace sasm {

void RunConfig::validate() const {
  scenario.validate();
  tracker.validate();
  if (n_seeds < 1)
    throw std::invalid_argument("run.n_seeds must be >= 1");
  if (scenario.embedding_dim != tracker.memory.embedding_dim)
    throw std::invalid_argument("scenario.embedding_dim and memory.embedding_dim differ");
}

ScenarioConfig rotationHeavyScenario() {
  ScenarioConfig sc;
  sc.n_objects = 8;
  sc.n_frames = 500;
  sc.rotation_event_prob = 0.01;
  sc.rotation_magnitude = 0.64;
  sc.occlusion_blend = 0.6;
  sc.drift_rate = 1.2;
  sc.noise_sigma = 0.014;
  sc.width_min = 0.17;
  sc.width_max = 0.21;
  sc.aspect_min = 1.5;
  sc.aspect_max = 2.2;
  sc.speed_min = 0.0005;
  sc.speed_max = 0.0097;
  sc.miss_prob_base = 0.018;
  sc.miss_prob_occluded = 0.8;
  sc.appearance_similarity = 0.25;
  return sc;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parseDouble(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("config key '" + std::string(key) + "': not a number: '" +
                                std::string(v) + "'");
  return out;
}

long parseInteger(std::string_view key, std::string_view v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("config key '" + std::string(key) + "': not an integer: '" +
                                std::string(v) + "'");
  return out;
}

std::string fmtDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string name;
  std::function<void(RunConfig &, std::string_view)> set;
  std::function<std::string(const RunConfig &)> get;
};

template <typename Member>
Field realField(std::string name, Member member) {
  return {name,
          [=](RunConfig &c, std::string_view v) { member(c) = parseDouble(name, v); },
          [=](const RunConfig &c) {
            RunConfig copy = c;
            return fmtDouble(member(copy));
          }};
}

template <typename Member>
Field intField(std::string name, Member member) {
  return {name,
          [=](RunConfig &c, std::string_view v) {
            member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(
                parseInteger(name, v));
          },
          [=](const RunConfig &c) {
            RunConfig copy = c;
            return std::to_string(member(copy));
          }};
}

#define SASM_REAL(key, expr) realField(key, [](RunConfig &c) -> double & { return expr; })
#define SASM_INT(key, type, expr) intField(key, [](RunConfig &c) -> type & { return expr; })

const std::vector<Field> &fields() {
  static const std::vector<Field> table = {
      SASM_INT("scenario.n_objects", int, c.scenario.n_objects),
      SASM_INT("scenario.n_frames", int, c.scenario.n_frames),
      {"scenario.embedding_dim",
       [](RunConfig &c, std::string_view v) {
         c.scenario.embedding_dim = static_cast<int>(parseInteger("scenario.embedding_dim", v));
         c.tracker.memory.embedding_dim = c.scenario.embedding_dim;
       },
       [](const RunConfig &c) { return std::to_string(c.scenario.embedding_dim); }},
      SASM_REAL("scenario.drift_rate", c.scenario.drift_rate),
      SASM_REAL("scenario.rotation_event_prob", c.scenario.rotation_event_prob),
      SASM_REAL("scenario.rotation_magnitude", c.scenario.rotation_magnitude),
      SASM_REAL("scenario.occlusion_blend", c.scenario.occlusion_blend),
      SASM_REAL("scenario.noise_sigma", c.scenario.noise_sigma),
      SASM_REAL("scenario.miss_prob_base", c.scenario.miss_prob_base),
      SASM_REAL("scenario.miss_prob_occluded", c.scenario.miss_prob_occluded),
      SASM_REAL("scenario.speed_min", c.scenario.speed_min),
      SASM_REAL("scenario.speed_max", c.scenario.speed_max),
      SASM_REAL("scenario.turn_prob", c.scenario.turn_prob),
      SASM_REAL("scenario.turn_sigma", c.scenario.turn_sigma),
      SASM_REAL("scenario.width_min", c.scenario.width_min),
      SASM_REAL("scenario.width_max", c.scenario.width_max),
      SASM_REAL("scenario.aspect_min", c.scenario.aspect_min),
      SASM_REAL("scenario.aspect_max", c.scenario.aspect_max),
      SASM_REAL("scenario.box_jitter", c.scenario.box_jitter),
      SASM_REAL("scenario.appearance_similarity", c.scenario.appearance_similarity),
      {"scenario.seed",
       [](RunConfig &c, std::string_view v) {
         std::uint64_t s = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
           throw std::invalid_argument("config key 'scenario.seed': not an unsigned integer");
         c.scenario.seed = s;
       },
       [](const RunConfig &c) { return std::to_string(c.scenario.seed); }},
      SASM_REAL("memory.epsilon", c.tracker.memory.epsilon),
      SASM_INT("memory.max_entries", int, c.tracker.memory.max_entries),
      SASM_REAL("memory.alpha", c.tracker.memory.alpha),
      SASM_REAL("memory.delay_overlap", c.tracker.memory.delay_overlap_threshold),
      {"memory.policy",
       [](RunConfig &c, std::string_view v) { c.tracker.memory.policy = parseMemoryPolicy(v); },
       [](const RunConfig &c) { return std::string(toString(c.tracker.memory.policy)); }},
      SASM_REAL("tracker.match_threshold", c.tracker.match_threshold),
      SASM_REAL("tracker.iou_gate", c.tracker.iou_gate),
      SASM_REAL("tracker.min_score", c.tracker.min_score),
      SASM_INT("tracker.max_misses", int, c.tracker.max_misses),
      SASM_REAL("tracker.cost_blend", c.tracker.cost_blend),
      SASM_INT("run.n_seeds", int, c.n_seeds),
      {"run.image_size",
       [](RunConfig &c, std::string_view v) { c.image_size = parseImageSize(v); },
       [](const RunConfig &c) {
         return fmtDouble(c.image_size.width) + "x" + fmtDouble(c.image_size.height);
       }},
      {"run.output_dir", [](RunConfig &c, std::string_view v) { c.output_dir = std::string(v); },
       [](const RunConfig &c) { return c.output_dir.string(); }},
  };
  return table;
}

#undef SASM_REAL
#undef SASM_INT

} // namespace

void applyConfigValue(RunConfig &cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto &f : fields())
    if (f.name == key) {
      f.set(cfg, value);
      return;
    }
  throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

void applyConfigText(RunConfig &cfg, std::string_view text) {
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("config line " + std::to_string(lineNo) +
                                    ": expected 'key = value'");
      try {
        applyConfigValue(cfg, line.substr(0, eq), line.substr(eq + 1));
      } catch (const std::invalid_argument &e) {
        throw std::invalid_argument("config line " + std::to_string(lineNo) + ": " + e.what());
      }
    }
    if (end == std::string_view::npos)
      break;
    start = end + 1;
  }
}

std::vector<std::string> configKeys() {
  std::vector<std::string> keys;
  for (const auto &f : fields())
    keys.push_back(f.name);
  return keys;
}

std::string dumpConfig(const RunConfig &cfg) {
  std::string out;
  for (const auto &f : fields())
    out += f.name + " = " + f.get(cfg) + "\n";
  return out;
}

} // namespace sasm
