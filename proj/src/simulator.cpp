#include "polling/simulator.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <limits>
#include <map>

#include "polling/error.hpp"
#include "polling/gg.hpp"
#include "polling/parallel.hpp"

namespace polling {

std::string to_string(ProbeMetric m) {
    switch (m) {
        case ProbeMetric::Cycle: return "cycle";
        case ProbeMetric::Delivery: return "delivery";
        case ProbeMetric::Sojourn: return "sojourn";
    }
    return "";
}

ProbeMetric parse_probe_metric(const std::string& s) {
    if (s == "cycle") return ProbeMetric::Cycle;
    if (s == "delivery") return ProbeMetric::Delivery;
    if (s == "sojourn") return ProbeMetric::Sojourn;
    throw Error(ErrorKind::InvalidConfig, "unknown probe metric '" + s + "'");
}

std::int64_t default_warmup(const SystemParameters& p) {
    return static_cast<std::int64_t>(std::ceil(10.0 * cycle_moments(p).mean_c * p.lambda()));
}

double t_half_width(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double m = 0.0;
    for (double v : xs) m += v;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : xs) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    return q * sd / std::sqrt(static_cast<double>(n));
}

const SimulationEstimate& estimate(const std::vector<SimulationEstimate>& all,
                                   const std::string& metric) {
    for (const auto& e : all)
        if (e.metric == metric) return e;
    throw Error(ErrorKind::InvalidConfig, "no simulated metric '" + metric + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kTraceCap = 1000000;

struct Customer {
    double arrival;
    std::uint64_t batch;
};

struct BatchRec {
    double arrival;
    int remaining;
    bool measured;
};

struct RepResult {
    double sum_s = 0, sum_d = 0;
    std::int64_t n_batches = 0;
    double area_l = 0, busy = 0, window = 0;
    double sum_c = 0, sum_c2 = 0;
    std::int64_t n_cycles = 0;
    std::int64_t violations = 0;
    std::vector<double> probe_sum;
};

class Tracer {
public:
    explicit Tracer(const std::string& path) {
        if (path.empty()) return;
        f_ = std::fopen(path.c_str(), "w");
        if (!f_) throw Error(ErrorKind::InvalidConfig, "cannot open trace file " + path);
        std::fputs("time,event,position,batch\n", f_);
    }
    ~Tracer() {
        if (f_) std::fclose(f_);
    }
    Tracer(const Tracer&) = delete;
    Tracer& operator=(const Tracer&) = delete;

    void row(double t, const char* kind, double x, std::int64_t batch) {
        if (!f_ || rows_ >= kTraceCap) return;
        fmt::print(f_, "{:.9g},{},{:.9g},{}\n", t, kind, x, batch);
        ++rows_;
    }

private:
    std::FILE* f_ = nullptr;
    std::int64_t rows_ = 0;
};

RepResult run_replication(const SimulationConfig& cfg, std::int64_t warmup, int rep,
                          std::span<const Probe> probes) {
    const SystemParameters& p = cfg.params;
    const bool gated_policy = cfg.policy == Policy::GloballyGated;
    const double alpha = p.alpha(), lambda = p.lambda();
    Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep));
    Tracer trace(rep == 0 ? cfg.trace_path : std::string());

    const std::int64_t first = warmup, last = warmup + cfg.measured_batches;
    RepResult res;
    res.probe_sum.assign(probes.size(), 0.0);

    std::multimap<double, Customer> queue;        // exhaustive: all waiting; GG: gated set
    std::vector<std::pair<double, Customer>> pending;  // GG arrivals since the last crossing
    std::vector<BatchRec> batches;
    batches.reserve(static_cast<std::size_t>(last) + 1024);
    std::vector<std::uint64_t> completed;

    double t = 0.0, x = 0.0;
    double t0 = kInf, t1 = kInf;
    double last_cross = 0.0, cycle_start = 0.0;
    bool serving = false;
    double t_end = kInf;
    Customer current{};
    std::int64_t waiting = 0, delivered = 0;
    double t_arr = rng.exponential(lambda);

    auto advance = [&](double tn) {
        const double lo = std::max(t, t0), hi = std::min(tn, t1);
        if (hi > lo) {
            res.area_l += static_cast<double>(waiting) * (hi - lo);
            if (serving) res.busy += hi - lo;
        }
        if (!serving) x = std::min(x + (tn - t) / alpha, std::nextafter(1.0, 0.0));
        t = tn;
    };
    auto add_probe = [&](ProbeMetric m, double v) {
        for (std::size_t i = 0; i < probes.size(); ++i)
            if (probes[i].metric == m) res.probe_sum[i] += std::exp(-probes[i].omega * v);
    };

    while (delivered < cfg.measured_batches) {
        double t_srv;
        enum { Stop, Depot, End } kind;
        std::multimap<double, Customer>::iterator target;
        if (serving) {
            t_srv = t_end;
            kind = End;
        } else {
            target = queue.lower_bound(x);
            if (target != queue.end()) {
                t_srv = t + alpha * (target->first - x);
                kind = Stop;
            } else {
                t_srv = t + alpha * (1.0 - x);
                kind = Depot;
            }
        }

        if (t_arr < t_srv) {
            advance(t_arr);
            const auto id = static_cast<std::uint64_t>(batches.size());
            const int k = p.batch().sample(rng.uniform());
            const auto sid = static_cast<std::int64_t>(id);
            if (sid == first) t0 = t;
            if (sid == last) t1 = t;
            batches.push_back({t, k, sid >= first && sid < last});
            for (int c = 0; c < k; ++c) {
                const double pos = p.location().sample(rng.uniform());
                if (gated_policy)
                    pending.emplace_back(pos, Customer{t, id});
                else
                    queue.emplace(pos, Customer{t, id});
                trace.row(t, "arrival", pos, sid);
            }
            waiting += k;
            t_arr = t + rng.exponential(lambda);
            continue;
        }

        advance(t_srv);
        switch (kind) {
            case Stop: {
                x = target->first;
                current = target->second;
                queue.erase(target);
                if (gated_policy && !(current.arrival < last_cross)) ++res.violations;
                --waiting;
                serving = true;
                t_end = t + p.service().sample(rng);
                trace.row(t, "service_start", x, static_cast<std::int64_t>(current.batch));
                break;
            }
            case End: {
                serving = false;
                t_end = kInf;
                BatchRec& b = batches[current.batch];
                trace.row(t, "service_end", x, static_cast<std::int64_t>(current.batch));
                if (--b.remaining == 0) {
                    completed.push_back(current.batch);
                    if (b.measured) {
                        res.sum_s += t - b.arrival;
                        add_probe(ProbeMetric::Sojourn, t - b.arrival);
                    }
                }
                break;
            }
            case Depot: {
                x = 0.0;
                trace.row(t, "depot", 0.0, -1);
                if (cycle_start >= t0 && cycle_start < t1) {
                    const double c = t - cycle_start;
                    res.sum_c += c;
                    res.sum_c2 += c * c;
                    ++res.n_cycles;
                    add_probe(ProbeMetric::Cycle, c);
                }
                cycle_start = t;
                last_cross = t;
                for (std::uint64_t id : completed) {
                    const BatchRec& b = batches[id];
                    if (!b.measured) continue;
                    res.sum_d += t - b.arrival;
                    add_probe(ProbeMetric::Delivery, t - b.arrival);
                    ++delivered;
                }
                completed.clear();
                if (gated_policy) {
                    res.violations += static_cast<std::int64_t>(queue.size());
                    queue.clear();
                    for (const auto& [pos, c] : pending) queue.emplace(pos, c);
                    pending.clear();
                }
                break;
            }
        }
    }
    res.n_batches = cfg.measured_batches;
    res.window = t1 - t0;
    return res;
}

void validate(const SimulationConfig& cfg, std::span<const Probe> probes) {
    if (cfg.measured_batches < 1000)
        throw Error(ErrorKind::InvalidConfig, "measured_batches must be at least 1000");
    if (cfg.replications < 3) throw Error(ErrorKind::InvalidConfig, "replications must be at least 3");
    if (!(cfg.params.lambda() > 0.0))
        throw Error(ErrorKind::InvalidConfig, "simulation needs a positive arrival rate");
    for (const Probe& pr : probes)
        if (!(pr.omega >= 0.0) || !std::isfinite(pr.omega))
            throw Error(ErrorKind::InvalidConfig, "probe omega must be nonnegative");
}

}  // namespace

std::vector<SimulationEstimate> simulate(const SimulationConfig& cfg, std::span<const Probe> probes) {
    validate(cfg, probes);
    const std::int64_t warmup = cfg.warmup_batches < 0 ? default_warmup(cfg.params) : cfg.warmup_batches;
    const int reps = cfg.replications;
    std::vector<RepResult> results(static_cast<std::size_t>(reps));
    parallel_for(reps, [&](int r) { results[static_cast<std::size_t>(r)] = run_replication(cfg, warmup, r, probes); });

    std::vector<SimulationEstimate> out;
    auto add = [&](std::string name, auto&& per_rep) {
        std::vector<double> xs;
        for (const RepResult& r : results) xs.push_back(per_rep(r));
        double m = 0.0;
        for (double v : xs) m += v;
        m /= static_cast<double>(xs.size());
        out.push_back({std::move(name), m, t_half_width(xs), reps, cfg.measured_batches * reps});
    };
    auto nb = [](const RepResult& r) { return static_cast<double>(r.n_batches); };
    auto nc = [](const RepResult& r) { return static_cast<double>(r.n_cycles); };
    add("sojourn", [&](const RepResult& r) { return r.sum_s / nb(r); });
    add("delivery", [&](const RepResult& r) { return r.sum_d / nb(r); });
    add("waiting", [](const RepResult& r) { return r.area_l / r.window; });
    add("busy_fraction", [](const RepResult& r) { return r.busy / r.window; });
    add("cycle_mean", [&](const RepResult& r) { return r.sum_c / nc(r); });
    add("cycle_second_moment", [&](const RepResult& r) { return r.sum_c2 / nc(r); });
    add("cycles", nc);
    add("gate_violations", [](const RepResult& r) { return static_cast<double>(r.violations); });
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Probe pr = probes[i];
        add(fmt::format("lst_{}@{:g}", to_string(pr.metric), pr.omega), [&](const RepResult& r) {
            return r.probe_sum[i] / (pr.metric == ProbeMetric::Cycle ? nc(r) : nb(r));
        });
    }
    return out;
}

SimulationEstimate lst_probe(const SimulationConfig& cfg, ProbeMetric metric, double omega) {
    const Probe pr{metric, omega};
    return simulate(cfg, std::span<const Probe>(&pr, 1)).back();
}

}  // namespace polling
