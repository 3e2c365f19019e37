#pragma once

#include "sasm/metrics.hpp"
#include "sasm/simulator.hpp"
#include "sasm/tracker.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasm {

struct ImageSize {
  double width = 1000.0;
  double height = 1000.0;
};

/// Parses "WxH", e.g. "1920x1080".
ImageSize parseImageSize(std::string_view text);

/// One MOTChallenge row with its box normalized to unit coordinates.
struct MotRow {
  long frame = 1;
  long id = -1;
  Box2d box;
  double conf = 1.0;
};

struct MotFrame {
  long frame = 1;
  std::vector<MotRow> rows; // file order
};

/// Parses comma-separated MOTChallenge rows, grouped by ascending frame.
/// A "# image-size WxH" comment line sets the normalization unless `size`
/// is given; with neither, parsing fails. Other '#' lines are ignored.
std::vector<MotFrame> parseMotFile(std::string_view text,
                                   std::optional<ImageSize> size = std::nullopt);

/// Writes rows as `frame,id,left,top,width,height,conf,-1,-1,-1` in pixels,
/// six decimals.
std::string writeMotFile(std::span<const MotRow> rows, ImageSize size);

/// Sidecar embedding line: `frame,det_index,e_1,...,e_D`, nine significant digits.
struct EmbeddingRow {
  long frame = 1;
  long det_index = 0;
  Eigen::VectorXd values;
};

std::vector<EmbeddingRow> parseEmbeddingFile(std::string_view text);
std::string writeEmbeddingFile(std::span<const EmbeddingRow> rows);

// Conversions between in-memory types and file rows.
std::vector<MotRow> gtRows(const Scenario &sc);
std::vector<MotRow> detectionRows(const Scenario &sc);
std::vector<EmbeddingRow> embeddingRows(const Scenario &sc);
std::vector<MotRow> resultRows(std::span<const FrameResult> results);

/// Joins detection rows with their embeddings into per-frame detections for
/// frames 1..last frame present. Every detection needs an embedding.
std::vector<std::vector<Detection>> joinDetections(const std::vector<MotFrame> &dets,
                                                   const std::vector<EmbeddingRow> &embeddings);

/// Per-frame (id, box) sequence; frame f lands at index f - 1.
Sequence toSequence(const std::vector<MotFrame> &frames);
Sequence toSequence(const std::vector<std::vector<GtObject>> &gt);
Sequence toSequence(std::span<const FrameResult> results);

std::string readFile(const std::filesystem::path &path);
void writeFile(const std::filesystem::path &path, std::string_view contents);

} // namespace sasm
