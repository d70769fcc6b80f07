// Copyright 2026 The censorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "censorloc/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace censorloc {
namespace {

using nlohmann::json;

constexpr const char* kCountries[] = {"US", "CN", "DE", "RU", "IR", "GB",
                                      "IN", "BR", "FR", "JP", "TR", "PK"};
constexpr Asn kFirstAsn = 1000;

// Distribution helpers built on the raw engine output, so that a seed
// yields the same world under any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n).
  std::size_t below(std::size_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  std::size_t weighted(const std::vector<double>& weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double x = unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    return weights.size() - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<Ipv4> allocate_prefixes(int count) {
  std::vector<Ipv4> out;
  for (std::uint32_t a = 11; a < 224 && static_cast<int>(out.size()) < count; ++a) {
    if (a == 100 || a == 127 || a == 169 || a == 172 || a == 192) continue;
    for (std::uint32_t b = 0; b < 256 && static_cast<int>(out.size()) < count; ++b)
      out.push_back(Ipv4{(a << 24) | (b << 16)});
  }
  if (static_cast<int>(out.size()) < count)
    throw std::invalid_argument("too many ASes for the /16 address plan");
  return out;
}

// Number of distinct ordered transit sequences of length 1..max_hops.
double constructible_paths(int transits, int max_hops) {
  if (transits == 0) return 1;
  double total = 0, perms = 1;
  for (int k = 1; k <= std::min(max_hops, transits); ++k) {
    perms *= transits - k + 1;
    total += perms;
  }
  return total;
}

void enumerate_sequences(const std::vector<Asn>& transits, int max_hops,
                         std::vector<Asn>& current, std::vector<bool>& used,
                         std::vector<std::vector<Asn>>& out) {
  if (!current.empty()) out.push_back(current);
  if (static_cast<int>(current.size()) == max_hops) return;
  for (std::size_t i = 0; i < transits.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(transits[i]);
    enumerate_sequences(transits, max_hops, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

Ipv4 host_in(Ipv4 prefix, Rng& rng) {
  return Ipv4{prefix.bits | static_cast<std::uint32_t>(1 + rng.below(65534))};
}

}  // namespace

void SimParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(n_ases >= 2, "n_ases must be at least 2");
  require(n_vantage >= 1, "n_vantage must be at least 1");
  require(n_urls >= 1, "n_urls must be at least 1");
  require(n_censors >= 0 && n_censors <= n_ases, "n_censors must be in [0, n_ases]");
  require(path_pool_size >= 1, "path_pool_size must be at least 1");
  require(days >= 1, "days must be at least 1");
  require(rounds_per_day >= 1, "rounds_per_day must be at least 1");
  require(n_vantage < n_ases, "n_vantage must leave room for destination ASes");
  require(churn_prob >= 0 && churn_prob <= 1, "churn_prob must be in [0, 1]");
  require(noise_prob >= 0 && noise_prob <= 1, "noise_prob must be in [0, 1]");
  require(nonresponsive_rate >= 0 && nonresponsive_rate <= 1,
          "nonresponsive_rate must be in [0, 1]");
  require(!anomalies.empty(), "at least one anomaly type is required");
  require(max_transit_hops >= 1, "max_transit_hops must be at least 1");
  require(transit_skew >= 0, "transit_skew must be non-negative");
  require(parse_timestamp(start_date + "T00:00:00Z").has_value(),
          "start_date must be YYYY-MM-DD");
  const int last = censor_last_day == 0 ? days : censor_last_day;
  require(censor_first_day >= 1 && censor_first_day <= last,
          "censor active range is empty");
}

bool PlantedCensor::active(const std::string& url, AnomalyType a, int day) const {
  return a == anomaly && day >= first_day && day <= last_day &&
         std::binary_search(urls.begin(), urls.end(), url);
}

const SimAs& SyntheticWorld::as_info(Asn asn) const { return ases.at(asn - kFirstAsn); }

std::string SyntheticWorld::pfx2as_tsv() const {
  std::string out;
  for (const auto& as : ases) {
    out += as.prefix.str() + "\t16\t" + std::to_string(as.asn) + "\n";
  }
  return out;
}

std::string SyntheticWorld::as_meta_csv() const {
  std::string out = "asn,country,name\n";
  for (const auto& as : ases) {
    out += std::to_string(as.asn) + "," + as.country + ",SIM-AS" +
           std::to_string(as.asn) + "\n";
  }
  return out;
}

SyntheticWorld generate_world(const SimParams& params) {
  params.validate();
  Rng rng(params.seed);
  SyntheticWorld world;

  const int n_hosts =
      std::min(params.n_urls, std::max(1, (params.n_ases - params.n_vantage) / 2));
  const auto prefixes = allocate_prefixes(params.n_ases);
  std::vector<Asn> hosts, transits;
  for (int i = 0; i < params.n_ases; ++i) {
    SimAs as;
    as.asn = kFirstAsn + i;
    as.prefix = prefixes[i];
    as.country = kCountries[rng.below(std::size(kCountries))];
    if (i < params.n_vantage) {
      as.role = SimAs::Role::kVantage;
      world.vantages.push_back(as.asn);
    } else if (i < params.n_vantage + n_hosts) {
      as.role = SimAs::Role::kHost;
      hosts.push_back(as.asn);
    } else {
      as.role = SimAs::Role::kTransit;
      transits.push_back(as.asn);
    }
    world.ases.push_back(std::move(as));
  }
  if (world.ases[1].country == world.ases[0].country) {
    world.ases[1].country = world.ases[0].country == "US" ? "CN" : "US";
  }

  for (int u = 0; u < params.n_urls; ++u) {
    const Asn host = hosts[u % hosts.size()];
    SimUrl url;
    url.url = "http://site" + std::to_string(u) + ".example/";
    url.host_asn = host;
    url.dst_ip = host_in(world.as_info(host).prefix, rng);
    world.urls.push_back(std::move(url));
  }

  // Transit popularity follows a Zipf law over a random ranking.
  std::vector<Asn> ranked = transits;
  rng.shuffle(ranked);
  std::vector<double> weights;
  for (std::size_t r = 0; r < ranked.size(); ++r)
    weights.push_back(1.0 / std::pow(static_cast<double>(r + 1), params.transit_skew));

  const int max_hops = std::min<int>(params.max_transit_hops, transits.size());
  if (constructible_paths(transits.size(), max_hops) < params.path_pool_size) {
    throw std::invalid_argument(
        "path_pool_size " + std::to_string(params.path_pool_size) +
        " exceeds the number of distinct paths the topology allows");
  }

  for (Asn vantage : world.vantages) {
    for (Asn host : hosts) {
      std::set<std::vector<Asn>> chosen;
      std::vector<AsPath> pool;
      auto add = [&](const std::vector<Asn>& middle) {
        if (!chosen.insert(middle).second) return;
        AsPath p{{vantage}};
        p.asns.insert(p.asns.end(), middle.begin(), middle.end());
        p.asns.push_back(host);
        pool.push_back(std::move(p));
      };
      if (ranked.empty()) add({});
      const int attempts = 1000 * params.path_pool_size;
      for (int a = 0; a < attempts && static_cast<int>(pool.size()) < params.path_pool_size &&
                      !ranked.empty();
           ++a) {
        const int k = 1 + static_cast<int>(rng.below(max_hops));
        std::vector<double> w = weights;
        std::vector<Asn> middle;
        for (int h = 0; h < k; ++h) {
          const std::size_t pick = rng.weighted(w);
          middle.push_back(ranked[pick]);
          w[pick] = 0.0;
        }
        add(middle);
      }
      if (static_cast<int>(pool.size()) < params.path_pool_size) {
        std::vector<std::vector<Asn>> all;
        std::vector<Asn> current;
        std::vector<bool> used(ranked.size(), false);
        enumerate_sequences(ranked, max_hops, current, used, all);
        rng.shuffle(all);
        for (const auto& m : all) {
          if (static_cast<int>(pool.size()) >= params.path_pool_size) break;
          add(m);
        }
      }
      world.pools[{vantage, host}] = std::move(pool);
    }
  }

  // Censors are drawn from ASes that actually carry traffic.
  std::set<Asn> on_paths;
  for (const auto& [_, pool] : world.pools) {
    for (const auto& p : pool) {
      for (std::size_t i = 1; i + 1 < p.asns.size(); ++i) on_paths.insert(p.asns[i]);
    }
  }
  std::vector<Asn> candidates(on_paths.begin(), on_paths.end());
  rng.shuffle(candidates);
  std::vector<Asn> rest;
  for (const auto& as : world.ases) {
    if (!on_paths.contains(as.asn)) rest.push_back(as.asn);
  }
  rng.shuffle(rest);
  candidates.insert(candidates.end(), rest.begin(), rest.end());

  const int last_day = params.censor_last_day == 0 ? params.days : params.censor_last_day;
  for (int c = 0; c < params.n_censors; ++c) {
    PlantedCensor censor;
    censor.asn = candidates[c];
    censor.anomaly = params.anomalies[c % params.anomalies.size()];
    censor.first_day = params.censor_first_day;
    censor.last_day = last_day;
    std::vector<std::string> reachable;
    for (const auto& url : world.urls) {
      bool through = false;
      for (Asn v : world.vantages) {
        for (const auto& p : world.pools.at({v, url.host_asn})) {
          through |= std::find(p.asns.begin(), p.asns.end(), censor.asn) != p.asns.end();
        }
      }
      if (through) reachable.push_back(url.url);
    }
    for (const auto& u : reachable) {
      if (rng.chance(0.5)) censor.urls.push_back(u);
    }
    if (censor.urls.empty()) {
      censor.urls.push_back(reachable.empty() ? world.urls[rng.below(world.urls.size())].url
                                              : reachable[rng.below(reachable.size())]);
    }
    std::sort(censor.urls.begin(), censor.urls.end());
    world.censors.push_back(std::move(censor));
  }
  return world;
}

MeasurementStream generate_measurements(const SyntheticWorld& world,
                                        const SimParams& params) {
  params.validate();
  // Independent stream so that measurement draws do not perturb the world.
  Rng rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
  MeasurementStream stream;
  stream.truth.censors = world.censors;
  for (const auto& as : world.ases) stream.truth.countries[as.asn] = as.country;

  const Timestamp start = *parse_timestamp(params.start_date + "T00:00:00Z");

  std::map<std::pair<Asn, Asn>, std::size_t> current;
  for (const auto& [pair, pool] : world.pools) current[pair] = rng.below(pool.size());

  for (int day = 1; day <= params.days; ++day) {
    std::size_t seq = 0;
    const Timestamp day_start = start + std::chrono::days{day - 1};
    for (int round = 1; round <= params.rounds_per_day; ++round) {
      if (day > 1 || round > 1) {
        for (auto& [pair, idx] : current) {
          const std::size_t n = world.pools.at(pair).size();
          if (n > 1 && rng.chance(params.churn_prob)) {
            idx = (idx + 1 + rng.below(n - 1)) % n;
          }
        }
      }
      for (Asn vantage : world.vantages) {
        for (std::size_t u = 0; u < world.urls.size(); ++u) {
          const SimUrl& url = world.urls[u];
          const AsPath& path = world.pools.at({vantage, url.host_asn})
                                   [current.at({vantage, url.host_asn})];

          // IP-level hops: one per vantage AS, one or two per transit AS, and
          // the destination itself.
          std::vector<Ipv4> ips;
          for (std::size_t i = 0; i + 1 < path.asns.size(); ++i) {
            const Ipv4 prefix = world.as_info(path.asns[i]).prefix;
            const int routers = i == 0 ? 1 : 1 + static_cast<int>(rng.below(2));
            for (int r = 0; r < routers; ++r) ips.push_back(host_in(prefix, rng));
          }
          ips.push_back(url.dst_ip);

          for (AnomalyType anomaly : params.anomalies) {
            MeasurementRecord rec;
            rec.record_id = "d" + std::to_string(day) +
                            (params.rounds_per_day > 1 ? "-r" + std::to_string(round) : "") +
                            "-v" + std::to_string(vantage) + "-u" + std::to_string(u) + "-" +
                            std::string(to_string(anomaly));
            rec.vantage_asn = vantage;
            rec.url = url.url;
            rec.dst_ip = url.dst_ip;
            rec.anomaly = anomaly;
            rec.timestamp = day_start + std::chrono::seconds{static_cast<long>(seq++ % 86400)};

            bool truth = false;
            for (const auto& censor : world.censors) {
              if (censor.active(url.url, anomaly, day) &&
                  std::find(path.asns.begin(), path.asns.end(), censor.asn) !=
                      path.asns.end())
                truth = true;
            }
            rec.detected = rng.chance(params.noise_prob) ? !truth : truth;

            for (auto& tr : rec.traceroutes) {
              tr.completed = true;
              for (std::size_t h = 0; h < ips.size(); ++h) {
                const bool silent =
                    h + 1 < ips.size() && rng.chance(params.nonresponsive_rate);
                tr.hops.push_back({silent ? std::nullopt : std::optional<Ipv4>(ips[h]),
                                   static_cast<int>(h + 1)});
              }
            }
            stream.truth.path_log.push_back({rec.record_id, path, truth, rec.detected});
            stream.records.push_back(std::move(rec));
          }
        }
      }
    }
  }
  return stream;
}

json GroundTruth::to_json() const {
  json cs = json::array();
  for (const auto& c : censors) {
    cs.push_back({{"asn", c.asn},
                  {"anomaly", to_string(c.anomaly)},
                  {"urls", c.urls},
                  {"first_day", c.first_day},
                  {"last_day", c.last_day}});
  }
  json countries_json = json::object();
  for (const auto& [asn, cc] : countries) countries_json[std::to_string(asn)] = cc;
  json log = json::array();
  for (const auto& e : path_log) {
    log.push_back({{"record_id", e.record_id},
                   {"path", e.path},
                   {"true_verdict", e.true_verdict},
                   {"emitted_verdict", e.emitted_verdict}});
  }
  return json{{"censors", cs}, {"countries", countries_json}, {"paths", log}};
}

GroundTruth GroundTruth::from_json(const json& j) {
  GroundTruth truth;
  for (const auto& c : j.at("censors")) {
    PlantedCensor censor;
    censor.asn = c.at("asn").get<Asn>();
    auto anomaly = parse_anomaly(c.at("anomaly").get<std::string>());
    if (!anomaly) throw InputError("ground truth: unknown anomaly type");
    censor.anomaly = *anomaly;
    censor.urls = c.at("urls").get<std::vector<std::string>>();
    censor.first_day = c.at("first_day").get<int>();
    censor.last_day = c.at("last_day").get<int>();
    truth.censors.push_back(std::move(censor));
  }
  for (const auto& [asn, cc] : j.at("countries").items())
    truth.countries[static_cast<Asn>(std::stoul(asn))] = cc.get<std::string>();
  for (const auto& e : j.at("paths")) {
    truth.path_log.push_back({e.at("record_id").get<std::string>(),
                              e.at("path").get<AsPath>(),
                              e.at("true_verdict").get<bool>(),
                              e.at("emitted_verdict").get<bool>()});
  }
  return truth;
}

namespace {

void finish(Scorecard::Counts& c) {
  const std::size_t flagged = c.true_positives + c.false_positives;
  if (flagged > 0) c.precision = static_cast<double>(c.true_positives) / flagged;
  if (c.planted > 0) c.recall = static_cast<double>(c.true_positives) / c.planted;
}

json counts_json(const Scorecard::Counts& c) {
  auto value = [](const std::optional<double>& v) { return v ? json(*v) : json("n/a"); };
  return json{{"true_positives", c.true_positives},
              {"false_positives", c.false_positives},
              {"planted", c.planted},
              {"precision", value(c.precision)},
              {"recall", value(c.recall)}};
}

json pairs_json(const std::vector<std::pair<Asn, AnomalyType>>& pairs) {
  json out = json::array();
  for (const auto& [asn, anomaly] : pairs)
    out.push_back({{"asn", asn}, {"anomaly", to_string(anomaly)}});
  return out;
}

}  // namespace

Scorecard evaluate(std::span<const CensorVerdict> verdicts, const GroundTruth& truth) {
  std::set<std::pair<Asn, AnomalyType>> planted;
  for (const auto& c : truth.censors) planted.insert({c.asn, c.anomaly});

  Scorecard card;
  std::set<std::pair<Asn, AnomalyType>> found, potential;
  for (const auto& v : verdicts) {
    const std::pair<Asn, AnomalyType> id{v.asn, v.anomaly};
    if (v.cls == CensorClass::kCensor) {
      found.insert(id);
      auto& per = card.per_anomaly[v.anomaly];
      if (planted.contains(id)) {
        ++card.overall.true_positives;
        ++per.true_positives;
      } else {
        ++card.overall.false_positives;
        ++per.false_positives;
        card.false_positives.push_back(id);
      }
    } else if (v.cls == CensorClass::kPotentialCensor) {
      potential.insert(id);
    }
  }
  for (const auto& id : planted) {
    ++card.overall.planted;
    ++card.per_anomaly[id.second].planted;
    if (!found.contains(id)) {
      card.missed.push_back(id);
      if (potential.contains(id)) card.potential_only.push_back(id);
    }
  }
  finish(card.overall);
  for (auto& [_, c] : card.per_anomaly) finish(c);
  return card;
}

json Scorecard::to_json() const {
  json per = json::object();
  for (const auto& [anomaly, c] : per_anomaly)
    per[std::string(censorloc::to_string(anomaly))] = counts_json(c);
  return json{{"overall", counts_json(overall)},
              {"per_anomaly", per},
              {"potential_only", pairs_json(potential_only)},
              {"false_positives", pairs_json(false_positives)},
              {"missed", pairs_json(missed)}};
}

}  // namespace censorloc
