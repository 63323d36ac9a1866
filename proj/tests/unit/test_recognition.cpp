#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <future>

#include "coldbench/recognition/pipeline.hpp"
#include "coldbench/testbed/config.hpp"
#include "properties.hpp"

using namespace coldbench;
using namespace coldbench::recognition;

namespace {

FramePayload frame(std::uint64_t id, const std::string& label = "coke", ActivityId act = 1) {
  FramePayload f;
  f.frame_id = id;
  f.activity_id = act;
  f.presentation_id = label.empty() ? 0 : 100 + id;
  f.captured_at = 0;
  f.label = label;
  return f;
}

RecognizerConfig forced(double p_hit) {
  RecognizerConfig c;
  c.p_hit = p_hit;
  c.raw_phrase_map = testbed::default_raw_phrases();
  return c;
}

RecognitionPipeline make_pipeline(const RecognizerConfig& config, std::uint64_t seed = 1) {
  PipelineOptions options;
  options.token_seed = seed;
  return RecognitionPipeline(config, Canonicalizer(testbed::default_rules()),
                             std::make_shared<SimulatedRecognizer>(config, seed), options);
}

}  // namespace

TEST_SUITE("recognition.lease_pool") {
  TEST_CASE("grants up to the pool size, then refuses") {
    LeasePool pool(9);
    std::vector<Lease> leases;
    for (int i = 0; i < 9; ++i) {
      auto l = pool.try_acquire(0);
      REQUIRE(l.has_value());
      leases.push_back(*l);
    }
    CHECK_FALSE(pool.try_acquire(0).has_value());
    CHECK(pool.outstanding() == 9);
    std::set<std::uint32_t> workers;
    for (const auto& l : leases) workers.insert(l.worker_id);
    CHECK(workers.size() == 9);
    pool.release(leases[3]);
    CHECK(leases[3].released);
    CHECK(pool.try_acquire(1).has_value());
  }

  TEST_CASE("released leases cannot be released again") {
    LeasePool pool(2);
    auto l = pool.acquire(0);
    pool.release(l);
    CHECK_FALSE(pool.is_outstanding(l));
    CHECK_THROWS_AS(pool.release(l), std::logic_error);
    Lease bogus;
    bogus.lease_id = 999;
    CHECK_THROWS_AS(pool.release(bogus), std::logic_error);
  }

  TEST_CASE("blocked acquirers are served in arrival order") {
    LeasePool pool(1);
    auto held = pool.acquire(0);
    std::vector<int> order;
    std::mutex mu;
    std::vector<std::thread> waiters;
    for (int i = 0; i < 4; ++i) {
      waiters.emplace_back([&, i] {
        auto l = pool.acquire(i);
        {
          std::lock_guard lock(mu);
          order.push_back(i);
        }
        pool.release(l);
      });
      while (pool.waiting() < static_cast<std::size_t>(i + 1)) std::this_thread::yield();
    }
    CHECK_FALSE(pool.try_acquire(0).has_value());  // no overtaking queued callers
    pool.release(held);
    for (auto& t : waiters) t.join();
    CHECK(order == std::vector<int>{0, 1, 2, 3});
  }

  TEST_CASE("resizing while leases are outstanding") {
    LeasePool pool(2);
    auto a = pool.acquire(0);
    auto b = pool.acquire(0);
    pool.add_worker();
    CHECK(pool.size() == 3);
    auto c = pool.try_acquire(0);
    REQUIRE(c.has_value());
    CHECK(pool.remove_worker());
    CHECK(pool.size() == 2);
    pool.release(a);
    pool.release(b);
    pool.release(*c);
    CHECK(pool.outstanding() == 0);
    CHECK(pool.remove_worker());
    CHECK_FALSE(pool.remove_worker());
  }

  TEST_CASE("zero-sized pools are rejected") { CHECK_THROWS(LeasePool(0)); }

  TEST_CASE("bound and no leaks under 1000 concurrent submissions") {
    const auto r = props::lease_pool_bound(1000, 3);
    INFO(r.failure);
    CHECK(r.ok);
  }
}

TEST_SUITE("recognition.frame_cache") {
  TEST_CASE("fetch before expiry returns the payload") {
    FrameCache cache(10, 1000, 1);
    const auto token = cache.put(frame(1), 0);
    CHECK(FrameCache::well_formed(token));
    const auto r = cache.fetch(token, 999);
    CHECK(r.status == FetchStatus::ok);
    CHECK(r.payload->frame_id == 1);
  }

  TEST_CASE("fetch after expiry of a non-permanent frame is expired") {
    FrameCache cache(10, 1000, 1);
    const auto token = cache.put(frame(1), 0);
    CHECK(cache.fetch(token, 1000).status == FetchStatus::expired);
  }

  TEST_CASE("promoted frames outlive the ttl") {
    FrameCache cache(10, 1000, 1);
    const auto token = cache.put(frame(1), 0);
    CHECK(cache.promote(token));
    CHECK(cache.fetch(token, 1'000'000).status == FetchStatus::ok);
    CHECK_FALSE(cache.promote(std::string(token.size(), '0')));
  }

  TEST_CASE("unknown tokens are not-found; malformed tokens are rejected") {
    FrameCache cache(10, 1000, 1);
    const auto token = cache.put(frame(1), 0);
    CHECK(cache.fetch(std::string(token.size(), 'a'), 0).status == FetchStatus::not_found);
    CHECK_THROWS_AS(cache.fetch("../etc/passwd", 0), std::invalid_argument);
  }

  TEST_CASE("least recently used non-permanent entries are evicted") {
    FrameCache cache(2, 60'000, 1);
    const auto a = cache.put(frame(1), 0);
    const auto b = cache.put(frame(2), 0);
    const auto p = cache.put(frame(3), 0);
    const bool one_evicted =
        cache.fetch(b, 1).status == FetchStatus::not_found || cache.fetch(a, 1).status == FetchStatus::not_found;
    CHECK(one_evicted);
    FrameCache lru(2, 60'000, 1);
    const auto x = lru.put(frame(1), 0);
    const auto y = lru.put(frame(2), 0);
    lru.fetch(x, 1);  // x is now the most recent
    lru.put(frame(3), 2);
    CHECK(lru.fetch(x, 3).status == FetchStatus::ok);
    CHECK(lru.fetch(y, 3).status == FetchStatus::not_found);
    CHECK(lru.evictions() == 1);
    (void)p;
  }

  TEST_CASE("promoted entries do not count against capacity") {
    FrameCache cache(1, 60'000, 1);
    const auto a = cache.put(frame(1), 0);
    cache.promote(a);
    const auto b = cache.put(frame(2), 0);
    CHECK(cache.fetch(a, 1).status == FetchStatus::ok);
    CHECK(cache.fetch(b, 1).status == FetchStatus::ok);
  }

  TEST_CASE("tokens are distinct") {
    FrameCache cache(1000, 60'000);
    std::set<std::string> tokens;
    for (std::uint64_t i = 0; i < 500; ++i) tokens.insert(cache.put(frame(i), 0));
    CHECK(tokens.size() == 500);
  }
}

TEST_SUITE("recognition.canonicalize") {
  const std::vector<CanonicalRule> coke_rule = {{"coca.?cola", "coke"}};

  TEST_CASE("a matching rule yields its canonical name") {
    const Canonicalizer c(coke_rule);
    const auto r = c.apply("coca cola 330ml can", true);
    CHECK(r.outcome == Canonical::Outcome::matched);
    CHECK(r.name == "coke");
  }

  TEST_CASE("unmatched phrases pass through when lenient") {
    const auto r = Canonicalizer(coke_rule).apply("mystery juice", false);
    CHECK(r.outcome == Canonical::Outcome::passthrough);
    CHECK(r.name == "mystery juice");
    CHECK(r.accepted());
  }

  TEST_CASE("unmatched phrases are rejected when strict") {
    const auto r = Canonicalizer(coke_rule).apply("mystery juice", true);
    CHECK(r.outcome == Canonical::Outcome::rejected);
    CHECK_FALSE(r.accepted());
  }

  TEST_CASE("the first matching rule wins") {
    const Canonicalizer c({{"milk", "milk"}, {"banana", "banana milk"}});
    CHECK(c.apply("banana milk", true).name == "milk");
  }

  TEST_CASE("invalid patterns are configuration errors naming the rule") {
    try {
      Canonicalizer({{"ok", "fine"}, {"(unclosed", "broken"}});
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      CHECK(what.find("(unclosed") != std::string::npos);
      CHECK(what.find("broken") != std::string::npos);
    }
  }

  TEST_CASE("rule files: tab-separated, comments allowed") {
    const auto rules = Canonicalizer::parse_rules("# rules\ncoca.?cola\tcoke\n\nsprite\tsprite\n");
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].pattern == "coca.?cola");
    CHECK(rules[0].canonical_name == "coke");
    CHECK_THROWS_AS(Canonicalizer::parse_rules("no tab here\n"), ConfigError);

    const auto path = std::filesystem::temp_directory_path() / "coldbench_rules_test.tsv";
    std::ofstream(path) << "fanta\tfanta\n";
    CHECK(Canonicalizer::from_file(path.string()).apply("fanta orange", true).name == "fanta");
    std::filesystem::remove(path);
  }

  TEST_CASE("default rules: each raw phrase matches exactly one rule and maps to its item") {
    const Canonicalizer c(testbed::default_rules());
    for (const auto& [item, phrase] : testbed::default_raw_phrases()) {
      CAPTURE(phrase);
      CHECK(c.match_count(phrase) == 1);
      CHECK(c.apply(phrase, true).name == item);
    }
  }

  TEST_CASE("default rules are idempotent") {
    const Canonicalizer c(testbed::default_rules());
    std::vector<std::string> phrases = {"mystery juice", "COCA-COLA zero", "cider", "", "vegemil soy"};
    for (const auto& [item, phrase] : testbed::default_raw_phrases()) {
      phrases.push_back(phrase);
      phrases.push_back(item);
    }
    for (const auto& p : phrases) {
      for (bool strict : {false, true}) {
        CAPTURE(p);
        const auto once = c.apply(p, strict);
        if (!once.accepted()) continue;
        const auto twice = c.apply(once.name, strict);
        CHECK(twice.accepted());
        CHECK(twice.name == once.name);
      }
    }
  }
}

TEST_SUITE("recognition.recognizer") {
  TEST_CASE("forced hit returns the raw phrase within the latency bounds") {
    SimulatedRecognizer r(forced(1.0), 5);
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto out = r.recognize(frame(i));
      REQUIRE(out.raw_phrase.has_value());
      CHECK(*out.raw_phrase == "coca-cola classic 355ml can");
      CHECK(out.latency_ms >= 2000);
      CHECK(out.latency_ms <= 5000);
    }
  }

  TEST_CASE("p_hit 0 always misses") {
    SimulatedRecognizer r(forced(0.0), 5);
    for (std::uint64_t i = 0; i < 50; ++i) CHECK_FALSE(r.recognize(frame(i)).raw_phrase.has_value());
  }

  TEST_CASE("empty frames never hit") {
    SimulatedRecognizer r(forced(1.0), 5);
    CHECK_FALSE(r.recognize(frame(1, "")).raw_phrase.has_value());
  }

  TEST_CASE("duplicate frames of one presentation share the outcome") {
    SimulatedRecognizer r(forced(0.5), 8);
    for (std::uint64_t p = 1; p <= 40; ++p) {
      auto f = frame(p);
      f.presentation_id = p;
      const bool first = r.recognize(f).raw_phrase.has_value();
      for (int k = 0; k < 5; ++k) {
        f.frame_id += 1000;
        CHECK(r.recognize(f).raw_phrase.has_value() == first);
      }
    }
  }

  TEST_CASE("hit rate follows p_hit") {
    SimulatedRecognizer r(forced(0.77), 21);
    int hits = 0;
    const int n = 4000;
    for (int i = 1; i <= n; ++i) hits += r.recognize(frame(static_cast<std::uint64_t>(i))).raw_phrase ? 1 : 0;
    // Binomial sd is about 0.0067; allow four of them.
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.77).epsilon(0.035));
  }

  TEST_CASE("confusion reports another catalog phrase") {
    auto config = forced(1.0);
    config.confusion_prob = 1.0;
    SimulatedRecognizer r(config, 2);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const auto out = r.recognize(frame(i));
      REQUIRE(out.raw_phrase);
      CHECK(*out.raw_phrase != "coca-cola classic 355ml can");
    }
  }

  TEST_CASE("labels without a phrase are reported verbatim") {
    SimulatedRecognizer r(forced(1.0), 2);
    CHECK(*r.recognize(frame(1, "mystery juice")).raw_phrase == "mystery juice");
  }

  TEST_CASE("config validation") {
    RecognizerConfig c;
    c.p_hit = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    RecognizerConfig d;
    d.latency_ms_min = 6000;
    CHECK_THROWS_AS(d.validate(), ConfigError);
    RecognizerConfig e;
    e.pool_size = 0;
    CHECK_THROWS_AS(e.validate(), ConfigError);
  }
}

TEST_SUITE("recognition.pipeline") {
  TEST_CASE("10 frames on 9 workers: 9 run, 1 waits") {
    auto p = make_pipeline(forced(1.0));
    for (std::uint64_t i = 1; i <= 10; ++i) p.submit(frame(i), 0);
    CHECK(p.in_flight() == 9);
    CHECK(p.queued() == 1);
    const auto results = p.advance_to(20'000);
    CHECK(results.size() == 10);
    CHECK(p.pool().peak_outstanding() == 9);
    // The waiting frame starts when the first worker frees up.
    Millis first_done = results.front().completed_at;
    const auto late = std::find_if(results.begin(), results.end(), [](const auto& r) { return r.frame_id == 10; });
    REQUIRE(late != results.end());
    CHECK(late->started_at == first_done);
  }

  TEST_CASE("forced hit: canonical name after a latency in [2000, 5000]") {
    auto p = make_pipeline(forced(1.0));
    p.submit(frame(1), 100);
    CHECK(p.advance_to(2099).empty());
    const auto results = p.advance_to(5100);
    REQUIRE(results.size() == 1);
    const auto& r = results[0];
    CHECK(r.hit());
    CHECK(*r.name == "coke");
    CHECK(*r.raw_phrase == "coca-cola classic 355ml can");
    CHECK(r.completed_at - r.started_at >= 2000);
    CHECK(r.completed_at - r.started_at <= 5000);
    CHECK(r.activity_id == 1);
    CHECK(p.pool().outstanding() == 0);
    // A hit promotes the frame.
    CHECK(p.cache().fetch(r.frame_token, 10'000'000).status == FetchStatus::ok);
  }

  TEST_CASE("p_hit 0: a no-hit result and the lease is released") {
    auto p = make_pipeline(forced(0.0));
    p.submit(frame(1), 0);
    const auto results = p.advance_to(10'000);
    REQUIRE(results.size() == 1);
    CHECK_FALSE(results[0].hit());
    CHECK(p.pool().outstanding() == 0);
  }

  TEST_CASE("strict canonicalization rejects unknown phrases") {
    auto config = forced(1.0);
    config.strict_canonical = true;
    auto p = make_pipeline(config);
    p.submit(frame(1, "mystery juice"), 0);
    const auto results = p.advance_to(10'000);
    REQUIRE(results.size() == 1);
    CHECK(results[0].rejected);
    CHECK_FALSE(results[0].hit());
  }

  TEST_CASE("with p_hit 1 every distinct frame gets exactly one result") {
    auto p = make_pipeline(forced(1.0));
    for (std::uint64_t i = 1; i <= 40; ++i) p.submit(frame(i), static_cast<Millis>(i * 10));
    const auto results = p.advance_to(100'000);
    std::set<std::uint64_t> ids;
    for (const auto& r : results) {
      ids.insert(r.frame_id);
      CHECK(r.hit());
    }
    CHECK(ids.size() == 40);
    CHECK(results.size() == 40);
    for (std::size_t i = 1; i < results.size(); ++i) CHECK(results[i - 1].completed_at <= results[i].completed_at);
  }

  TEST_CASE("frames expiring in the queue come back as expired misses") {
    auto config = forced(1.0);
    config.pool_size = 1;
    PipelineOptions options;
    options.cache_ttl_ms = 1000;
    options.token_seed = 1;
    RecognitionPipeline p(config, Canonicalizer(testbed::default_rules()),
                          std::make_shared<SimulatedRecognizer>(config, 1), options);
    p.submit(frame(1), 0);
    p.submit(frame(2), 0);
    const auto results = p.advance_to(100'000);
    REQUIRE(results.size() == 2);
    CHECK(results[1].frame_expired);
    CHECK_FALSE(results[1].hit());
  }

  TEST_CASE("submissions after shutdown are rejected") {
    auto p = make_pipeline(forced(1.0));
    p.shutdown();
    CHECK_FALSE(p.running());
    CHECK_THROWS_AS(p.submit(frame(1), 0), PipelineShutdown);
  }

  TEST_CASE("next_completion tracks the earliest running job") {
    auto p = make_pipeline(forced(1.0));
    CHECK_FALSE(p.next_completion().has_value());
    p.submit(frame(1), 0);
    const auto next = p.next_completion();
    REQUIRE(next.has_value());
    CHECK(*next >= 2000);
    CHECK(p.advance_to(*next).size() == 1);
  }

  TEST_CASE("a failing recognizer still releases its lease") {
    struct Broken : Recognizer {
      RawRecognition recognize(const FramePayload&) override { throw std::runtime_error("backend down"); }
    };
    auto config = forced(1.0);
    RecognitionPipeline p(config, Canonicalizer(testbed::default_rules()), std::make_shared<Broken>(), {});
    for (std::uint64_t i = 1; i <= 12; ++i) p.submit(frame(i), 0);
    const auto results = p.advance_to(100'000);
    CHECK(results.size() == 12);
    for (const auto& r : results) {
      CHECK_FALSE(r.hit());
      CHECK(r.error == "backend down");
    }
    CHECK(p.pool().outstanding() == 0);
  }
}
