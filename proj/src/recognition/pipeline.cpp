#include "coldbench/recognition/pipeline.hpp"

#include <stdexcept>

namespace coldbench::recognition {

RecognitionPipeline::RecognitionPipeline(RecognizerConfig config, Canonicalizer canonicalizer,
                                         std::shared_ptr<Recognizer> recognizer, PipelineOptions options)
    : config_(std::move(config)),
      canonicalizer_(std::move(canonicalizer)),
      recognizer_(std::move(recognizer)),
      cache_(options.cache_capacity, options.cache_ttl_ms, options.token_seed),
      pool_((config_.validate(), config_.pool_size)) {
  if (!recognizer_) throw std::invalid_argument("pipeline needs a recognizer");
}

std::string RecognitionPipeline::submit(FramePayload frame, Millis now) {
  std::lock_guard lock(mu_);
  if (!running_) throw PipelineShutdown();
  std::string token = cache_.put(frame, now);
  Job job;
  job.seq = next_seq_++;
  job.token = token;
  job.frame = std::move(frame);
  job.submitted_at = now;
  if (waiting_.empty()) {
    if (auto lease = pool_.try_acquire(now)) {
      job.lease = *lease;
      start(std::move(job), now);
      return token;
    }
  }
  waiting_.push_back(std::move(job));
  return token;
}

void RecognitionPipeline::start(Job job, Millis now) {
  job.started_at = now;
  const FetchResult fetched = cache_.fetch(job.token, now);
  if (fetched.status == FetchStatus::ok) {
    try {
      job.raw = recognizer_->recognize(*fetched.payload);
    } catch (const std::exception& e) {
      // A failed call still occupies the worker briefly and frees its lease.
      job.raw = RawRecognition{std::nullopt, config_.latency_ms_min};
      job.error = e.what();
    }
  } else {
    // The worker cannot retrieve the frame; it still answers (with nothing).
    job.expired = true;
    job.raw.latency_ms = config_.latency_ms_min;
  }
  job.completes_at = now + job.raw.latency_ms;
  active_.insert(std::move(job));
}

RecognitionResult RecognitionPipeline::finish(Job job) {
  pool_.release(job.lease);
  RecognitionResult result;
  result.activity_id = job.frame.activity_id;
  result.frame_token = job.token;
  result.frame_id = job.frame.frame_id;
  result.presentation_id = job.frame.presentation_id;
  result.raw_phrase = job.raw.raw_phrase;
  result.frame_expired = job.expired;
  result.error = job.error;
  result.submitted_at = job.submitted_at;
  result.started_at = job.started_at;
  result.completed_at = job.completes_at;
  result.worker_id = job.lease.worker_id;
  if (job.raw.raw_phrase) {
    const Canonical canonical = canonicalizer_.apply(*job.raw.raw_phrase, config_.strict_canonical);
    if (canonical.accepted()) {
      result.name = canonical.name;
      cache_.promote(job.token);
    } else {
      result.rejected = true;
    }
  }
  return result;
}

std::vector<RecognitionResult> RecognitionPipeline::advance_to(Millis t) {
  std::lock_guard lock(mu_);
  std::vector<RecognitionResult> out;
  while (!active_.empty() && active_.begin()->completes_at <= t) {
    auto node = active_.extract(active_.begin());
    const Millis done = node.value().completes_at;
    out.push_back(finish(std::move(node.value())));
    while (!waiting_.empty()) {
      auto lease = pool_.try_acquire(done);
      if (!lease) break;
      Job next = std::move(waiting_.front());
      waiting_.pop_front();
      next.lease = *lease;
      start(std::move(next), done);
    }
  }
  return out;
}

std::optional<Millis> RecognitionPipeline::next_completion() const {
  std::lock_guard lock(mu_);
  if (active_.empty()) return std::nullopt;
  return active_.begin()->completes_at;
}

void RecognitionPipeline::shutdown() {
  std::lock_guard lock(mu_);
  running_ = false;
}

bool RecognitionPipeline::running() const {
  std::lock_guard lock(mu_);
  return running_;
}

std::size_t RecognitionPipeline::in_flight() const {
  std::lock_guard lock(mu_);
  return active_.size();
}

std::size_t RecognitionPipeline::queued() const {
  std::lock_guard lock(mu_);
  return waiting_.size();
}

}  // namespace coldbench::recognition
