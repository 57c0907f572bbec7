#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sentiscope/analytics.hpp"
#include "sentiscope/emotion.hpp"
#include "sentiscope/error.hpp"

namespace sentiscope {

enum class TrendDirection { positive, negative };
enum class Timing { now, later };
enum class ScenarioId { S1, S2, S3, S4 };

inline std::string_view to_string(TrendDirection d) { return d == TrendDirection::positive ? "positive" : "negative"; }
inline std::string_view to_string(Timing t) { return t == Timing::now ? "now" : "later"; }
inline std::string_view to_string(ScenarioId id) {
  constexpr std::string_view names[] = {"S1", "S2", "S3", "S4"};
  return names[static_cast<int>(id)];
}

inline std::optional<Timing> parse_timing(std::string_view s) {
  if (s == "now") return Timing::now;
  if (s == "later") return Timing::later;
  return std::nullopt;
}

struct SentimentTrend {
  TrendDirection direction = TrendDirection::positive;
  double pos_share = 0.0;
  double neg_share = 0.0;
  std::vector<Emotion> dominant_emotions;  // informational; not used for direction
};

/// Direction is decided by comparing the positive and negative shares alone.
/// Equal shares have no direction and raise TiedTrend.
inline SentimentTrend derive_trend(double pos_share, double neg_share, const EmotionProfile& aggregate) {
  if (!std::isfinite(pos_share) || !std::isfinite(neg_share) || pos_share < 0.0 || neg_share < 0.0) {
    throw ConfigError("sentiment shares must be finite and non-negative");
  }
  if (pos_share == neg_share) {
    throw TiedTrend("positive and negative shares are equal (" + std::to_string(pos_share) + ")");
  }
  SentimentTrend t;
  t.direction = pos_share > neg_share ? TrendDirection::positive : TrendDirection::negative;
  t.pos_share = pos_share;
  t.neg_share = neg_share;
  for (const auto& [e, count] : dominant_classes(aggregate, 2)) t.dominant_emotions.push_back(e);
  return t;
}

inline SentimentTrend derive_trend(const PolarityDistribution& dist, const EmotionProfile& aggregate) {
  return derive_trend(dist.pos_share, dist.neg_share, aggregate);
}

struct ScenarioOutcome {
  ScenarioId id = ScenarioId::S1;
  std::string label;
  char narrative_key = 'a';

  bool operator==(const ScenarioOutcome&) const = default;
};

/// The 2x2 New Normal matrix:
///   positive/now -> S1 (a)   positive/later -> S2 (b)
///   negative/now -> S3 (c)   negative/later -> S4 (d)
inline ScenarioOutcome classify_scenario(const SentimentTrend& trend, Timing timing) {
  const int idx = (trend.direction == TrendDirection::positive ? 0 : 2) + (timing == Timing::now ? 0 : 1);
  static constexpr std::string_view labels[] = {
      "positive sentiment trend, reopen now",
      "positive sentiment trend, reopen later",
      "negative sentiment trend, reopen now",
      "negative sentiment trend, reopen later",
  };
  return {static_cast<ScenarioId>(idx), std::string(labels[idx]), static_cast<char>('a' + idx)};
}

inline nlohmann::json to_json(const ScenarioOutcome& o, const SentimentTrend& trend, Timing timing) {
  nlohmann::json dominant = nlohmann::json::array();
  for (Emotion e : trend.dominant_emotions) dominant.push_back(std::string(to_string(e)));
  return {{"id", std::string(to_string(o.id))},
          {"label", o.label},
          {"narrative_key", std::string(1, o.narrative_key)},
          {"inputs",
           {{"timing", std::string(to_string(timing))},
            {"direction", std::string(to_string(trend.direction))},
            {"pos_share", trend.pos_share},
            {"neg_share", trend.neg_share},
            {"dominant_emotions", dominant}}}};
}

}  // namespace sentiscope
