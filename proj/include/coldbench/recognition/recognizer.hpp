#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "coldbench/core/types.hpp"
#include "coldbench/recognition/frame_cache.hpp"

namespace coldbench::recognition {

struct RecognizerConfig {
  std::size_t pool_size = 9;
  Millis latency_ms_min = 2000;
  Millis latency_ms_max = 5000;
  double p_hit = 0.77;
  double confusion_prob = 0.0;
  bool strict_canonical = false;
  /// Item name -> keyword phrase the recognizer reports for it. Labels
  /// without an entry are reported verbatim.
  std::map<std::string, std::string> raw_phrase_map;

  void validate() const;
};

struct RawRecognition {
  /// Empty on a miss.
  std::optional<std::string> raw_phrase;
  Millis latency_ms = 0;
};

/// Pluggable recognizer. Implementations must be callable from several
/// threads at once.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual RawRecognition recognize(const FramePayload& frame) = 0;
};

/// Stochastic stand-in for the external image search.
///
/// Hit or miss is decided once per presentation: all duplicate frames of one
/// placement share the outcome, so a miss means the item goes unnamed. A hit
/// reports a different catalog item with probability `confusion_prob`.
/// Latency is drawn per frame.
class SimulatedRecognizer : public Recognizer {
 public:
  SimulatedRecognizer(RecognizerConfig config, std::uint64_t seed);

  RawRecognition recognize(const FramePayload& frame) override;

  const RecognizerConfig& config() const { return config_; }

 private:
  std::string phrase_for(const std::string& label) const;

  RecognizerConfig config_;
  std::mutex mu_;
  Rng rng_;
  std::unordered_map<std::uint64_t, std::optional<std::string>> outcomes_;
};

}  // namespace coldbench::recognition
