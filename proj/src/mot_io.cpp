#include "sasm/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sasm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> splitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

double toDouble(std::string_view field, std::size_t lineNo) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw std::runtime_error("line " + std::to_string(lineNo) + ": cannot parse number '" +
                             std::string(field) + "'");
  return v;
}

long toLong(std::string_view field, std::size_t lineNo) {
  const double v = toDouble(field, lineNo);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw std::runtime_error("line " + std::to_string(lineNo) + ": expected an integer, got '" +
                             std::string(field) + "'");
  return static_cast<long>(v);
}

template <typename Fn>
void forEachLine(std::string_view text, Fn &&fn) {
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineNo;
    fn(trim(line), lineNo);
    if (end == std::string_view::npos)
      break;
    start = end + 1;
  }
}

} // namespace

ImageSize parseImageSize(std::string_view text) {
  text = trim(text);
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos)
    throw std::invalid_argument("image size must look like WxH, got '" + std::string(text) + "'");
  ImageSize s;
  s.width = toDouble(text.substr(0, x), 0);
  s.height = toDouble(text.substr(x + 1), 0);
  if (!(s.width > 0.0) || !(s.height > 0.0))
    throw std::invalid_argument("image size must be positive, got '" + std::string(text) + "'");
  return s;
}

std::vector<MotFrame> parseMotFile(std::string_view text, std::optional<ImageSize> size) {
  std::optional<ImageSize> header;
  struct Raw {
    long frame, id;
    double left, top, w, h, conf;
    std::size_t line;
  };
  std::vector<Raw> raw;
  forEachLine(text, [&](std::string_view line, std::size_t lineNo) {
    if (line.empty())
      return;
    if (line.front() == '#') {
      const std::string_view tag = "image-size";
      const auto pos = line.find(tag);
      if (pos != std::string_view::npos)
        header = parseImageSize(line.substr(pos + tag.size()));
      return;
    }
    const auto f = splitCommas(line);
    if (f.size() < 6)
      throw std::runtime_error("line " + std::to_string(lineNo) + ": expected at least 6 fields, got " +
                               std::to_string(f.size()));
    Raw r{toLong(f[0], lineNo), toLong(f[1], lineNo), toDouble(f[2], lineNo), toDouble(f[3], lineNo),
          toDouble(f[4], lineNo), toDouble(f[5], lineNo), f.size() > 6 ? toDouble(f[6], lineNo) : 1.0,
          lineNo};
    if (r.frame < 1)
      throw std::runtime_error("line " + std::to_string(lineNo) + ": frame must be >= 1");
    if (!(r.w > 0.0) || !(r.h > 0.0))
      throw std::runtime_error("line " + std::to_string(lineNo) + ": non-positive width or height");
    raw.push_back(r);
  });

  const std::optional<ImageSize> norm = size ? size : header;
  if (!norm && !raw.empty())
    throw std::runtime_error("image size unknown: pass it explicitly or add '# image-size WxH'");

  std::map<long, MotFrame> grouped;
  for (const Raw &r : raw) {
    MotRow row;
    row.frame = r.frame;
    row.id = r.id;
    row.conf = r.conf;
    row.box = {(r.left + r.w / 2.0) / norm->width, (r.top + r.h / 2.0) / norm->height,
               r.w / norm->width, r.h / norm->height};
    auto &mf = grouped[r.frame];
    mf.frame = r.frame;
    mf.rows.push_back(row);
  }
  std::vector<MotFrame> out;
  out.reserve(grouped.size());
  for (auto &[frame, mf] : grouped)
    out.push_back(std::move(mf));
  return out;
}

std::string writeMotFile(std::span<const MotRow> rows, ImageSize size) {
  std::string out;
  char buf[256];
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%ld,%.6f,%.6f,%.6f,%.6f,%.6f,-1,-1,-1\n", r.frame, r.id,
                  r.box.left() * size.width, r.box.top() * size.height, r.box.w * size.width,
                  r.box.h * size.height, r.conf);
    out += buf;
  }
  return out;
}

std::vector<EmbeddingRow> parseEmbeddingFile(std::string_view text) {
  std::vector<EmbeddingRow> out;
  forEachLine(text, [&](std::string_view line, std::size_t lineNo) {
    if (line.empty() || line.front() == '#')
      return;
    const auto f = splitCommas(line);
    if (f.size() < 3)
      throw std::runtime_error("line " + std::to_string(lineNo) +
                               ": embedding rows need frame, det_index and values");
    EmbeddingRow row;
    row.frame = toLong(f[0], lineNo);
    row.det_index = toLong(f[1], lineNo);
    row.values.resize(static_cast<Eigen::Index>(f.size() - 2));
    for (std::size_t i = 2; i < f.size(); ++i)
      row.values[static_cast<Eigen::Index>(i - 2)] = toDouble(f[i], lineNo);
    if (!out.empty() && out.front().values.size() != row.values.size())
      throw std::runtime_error("line " + std::to_string(lineNo) + ": embedding dimension changes");
    out.push_back(std::move(row));
  });
  return out;
}

std::string writeEmbeddingFile(std::span<const EmbeddingRow> rows) {
  std::string out;
  char buf[64];
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%ld", r.frame, r.det_index);
    out += buf;
    for (Eigen::Index i = 0; i < r.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.9g", r.values[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<MotRow> gtRows(const Scenario &sc) {
  std::vector<MotRow> rows;
  for (std::size_t f = 0; f < sc.gt.size(); ++f)
    for (const auto &g : sc.gt[f])
      rows.push_back({static_cast<long>(f) + 1, g.id, g.box, 1.0});
  return rows;
}

std::vector<MotRow> detectionRows(const Scenario &sc) {
  std::vector<MotRow> rows;
  for (std::size_t f = 0; f < sc.detections.size(); ++f)
    for (const auto &d : sc.detections[f])
      rows.push_back({static_cast<long>(f) + 1, -1, d.box, d.score});
  return rows;
}

std::vector<EmbeddingRow> embeddingRows(const Scenario &sc) {
  std::vector<EmbeddingRow> rows;
  for (std::size_t f = 0; f < sc.detections.size(); ++f)
    for (std::size_t i = 0; i < sc.detections[f].size(); ++i)
      rows.push_back({static_cast<long>(f) + 1, static_cast<long>(i), sc.detections[f][i].embedding});
  return rows;
}

std::vector<MotRow> resultRows(std::span<const FrameResult> results) {
  std::vector<MotRow> rows;
  for (const auto &r : results)
    for (const auto &b : r.boxes)
      rows.push_back({r.frame, b.id, b.box, 1.0});
  return rows;
}

std::vector<std::vector<Detection>> joinDetections(const std::vector<MotFrame> &dets,
                                                   const std::vector<EmbeddingRow> &embeddings) {
  std::map<std::pair<long, long>, const EmbeddingRow *> index;
  for (const auto &e : embeddings)
    if (!index.emplace(std::make_pair(e.frame, e.det_index), &e).second)
      throw std::runtime_error("duplicate embedding for frame " + std::to_string(e.frame) +
                               ", detection " + std::to_string(e.det_index));
  const long last = dets.empty() ? 0 : dets.back().frame;
  std::vector<std::vector<Detection>> out(static_cast<std::size_t>(last));
  for (const auto &mf : dets) {
    for (std::size_t i = 0; i < mf.rows.size(); ++i) {
      const auto it = index.find({mf.frame, static_cast<long>(i)});
      if (it == index.end())
        throw std::runtime_error("missing embedding for frame " + std::to_string(mf.frame) +
                                 ", detection " + std::to_string(i));
      out[mf.frame - 1].push_back({mf.rows[i].box, it->second->values, mf.rows[i].conf});
    }
  }
  return out;
}

Sequence toSequence(const std::vector<MotFrame> &frames) {
  Sequence seq(frames.empty() ? 0 : static_cast<std::size_t>(frames.back().frame));
  for (const auto &mf : frames)
    for (const auto &r : mf.rows)
      seq[mf.frame - 1].push_back({r.id, r.box});
  return seq;
}

Sequence toSequence(const std::vector<std::vector<GtObject>> &gt) {
  Sequence seq(gt.size());
  for (std::size_t f = 0; f < gt.size(); ++f)
    for (const auto &g : gt[f])
      seq[f].push_back({g.id, g.box});
  return seq;
}

Sequence toSequence(std::span<const FrameResult> results) {
  Sequence seq;
  for (const auto &r : results) {
    if (static_cast<long>(seq.size()) < r.frame)
      seq.resize(static_cast<std::size_t>(r.frame));
    seq[r.frame - 1] = r.boxes;
  }
  return seq;
}

std::string readFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path &path, std::string_view contents) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

} // namespace sasm
