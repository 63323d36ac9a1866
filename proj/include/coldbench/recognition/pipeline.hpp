#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coldbench/recognition/canonicalizer.hpp"
#include "coldbench/recognition/frame_cache.hpp"
#include "coldbench/recognition/lease_pool.hpp"
#include "coldbench/recognition/recognizer.hpp"

namespace coldbench::recognition {

class PipelineShutdown : public std::runtime_error {
 public:
  PipelineShutdown() : std::runtime_error("recognition pipeline is shut down") {}
};

struct RecognitionResult {
  ActivityId activity_id = 0;
  std::string frame_token;
  std::uint64_t frame_id = 0;
  std::uint64_t presentation_id = 0;
  /// Canonical (or passed-through) name; empty on a miss or rejection.
  std::optional<std::string> name;
  std::optional<std::string> raw_phrase;
  /// The recognizer answered but strict canonicalization refused the phrase.
  bool rejected = false;
  /// The frame was no longer fetchable when a worker picked it up.
  bool frame_expired = false;
  /// The recognizer threw; the result counts as a miss.
  std::optional<std::string> error;
  Millis submitted_at = 0;
  Millis started_at = 0;
  Millis completed_at = 0;
  std::uint32_t worker_id = 0;

  bool hit() const { return name.has_value(); }
};

struct PipelineOptions {
  std::size_t cache_capacity = 1000;
  Millis cache_ttl_ms = 60'000;
  std::optional<std::uint64_t> token_seed;
};

/// Object recognition back end on virtual time.
///
/// Each submitted frame is cached under a short-term token and queued for a
/// worker lease; waiting frames are served first-come first-served as leases
/// come back. A worker holds its lease for the recognizer's latency, then the
/// raw phrase is canonicalized and a hit promotes the frame to permanent.
/// Time only moves through `advance_to`, which returns results in completion
/// order. All members are thread-safe.
class RecognitionPipeline {
 public:
  RecognitionPipeline(RecognizerConfig config, Canonicalizer canonicalizer,
                      std::shared_ptr<Recognizer> recognizer, PipelineOptions options = {});

  /// Returns the frame token. Throws PipelineShutdown after shutdown().
  std::string submit(FramePayload frame, Millis now);
  std::vector<RecognitionResult> advance_to(Millis t);
  std::optional<Millis> next_completion() const;
  /// Rejects further submissions; in-flight work still completes.
  void shutdown();
  bool running() const;

  std::size_t in_flight() const;
  std::size_t queued() const;
  FrameCache& cache() { return cache_; }
  const LeasePool& pool() const { return pool_; }
  const RecognizerConfig& config() const { return config_; }

 private:
  struct Job {
    std::uint64_t seq = 0;
    std::string token;
    FramePayload frame;
    Millis submitted_at = 0;
    Millis started_at = 0;
    Millis completes_at = 0;
    Lease lease;
    RawRecognition raw;
    bool expired = false;
    std::optional<std::string> error;
    bool operator<(const Job& other) const {
      return completes_at != other.completes_at ? completes_at < other.completes_at : seq < other.seq;
    }
  };

  void start(Job job, Millis now);
  RecognitionResult finish(Job job);

  RecognizerConfig config_;
  Canonicalizer canonicalizer_;
  std::shared_ptr<Recognizer> recognizer_;
  FrameCache cache_;
  LeasePool pool_;
  mutable std::mutex mu_;
  std::set<Job> active_;
  std::deque<Job> waiting_;
  std::uint64_t next_seq_ = 0;
  bool running_ = true;
};

}  // namespace coldbench::recognition
