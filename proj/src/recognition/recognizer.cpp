#include "coldbench/recognition/recognizer.hpp"

#include <iterator>
#include <vector>

namespace coldbench::recognition {

void RecognizerConfig::validate() const {
  if (pool_size == 0) throw ConfigError("pool_size must be positive");
  if (latency_ms_min <= 0 || latency_ms_max < latency_ms_min) {
    throw ConfigError("latency bounds must be positive and ordered");
  }
  if (!(p_hit >= 0.0 && p_hit <= 1.0)) throw ConfigError("p_hit must lie in [0, 1]");
  if (!(confusion_prob >= 0.0 && confusion_prob <= 1.0)) throw ConfigError("confusion_prob must lie in [0, 1]");
}

SimulatedRecognizer::SimulatedRecognizer(RecognizerConfig config, std::uint64_t seed)
    : config_(std::move(config)), rng_(seed) {
  config_.validate();
}

std::string SimulatedRecognizer::phrase_for(const std::string& label) const {
  const auto it = config_.raw_phrase_map.find(label);
  return it == config_.raw_phrase_map.end() ? label : it->second;
}

RawRecognition SimulatedRecognizer::recognize(const FramePayload& frame) {
  std::lock_guard lock(mu_);
  RawRecognition out;
  out.latency_ms = std::uniform_int_distribution<Millis>(config_.latency_ms_min, config_.latency_ms_max)(rng_);
  if (frame.label.empty()) return out;

  auto [it, fresh] = outcomes_.try_emplace(frame.presentation_id);
  if (fresh) {
    if (bernoulli(rng_, config_.p_hit)) {
      std::string label = frame.label;
      if (bernoulli(rng_, config_.confusion_prob)) {
        std::vector<std::string> others;
        for (const auto& [name, phrase] : config_.raw_phrase_map) {
          if (name != frame.label) others.push_back(name);
        }
        if (!others.empty()) label = others[uniform_index(rng_, others.size())];
      }
      it->second = phrase_for(label);
    }
  }
  out.raw_phrase = it->second;
  return out;
}

}  // namespace coldbench::recognition
