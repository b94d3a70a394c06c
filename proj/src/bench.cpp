#include "peek2/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>

#include "peek2/errors.hpp"

namespace peek2::bench {
namespace {

std::optional<double> reference_ratio(TaskKind kind) {
    // Throughput columns (peek2 / original) of the published Rust runs.
    switch (kind) {
        case TaskKind::encode_offsets: return 39.679901 / 37.159669;
        case TaskKind::encode: return 7.005605 / 6.207111;
        case TaskKind::encode_batch: return 46.037036 / 41.411058;
        case TaskKind::train: return 13.769592 / 13.315943;
        case TaskKind::pretokenize_only: break;
    }
    return std::nullopt;
}

double steady_now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

void check_task(const BenchTask& task) {
    if (task.repetitions < 3) {
        throw MissingFixture("task " + std::string(task_name(task.kind)) +
                             ": at least 3 repetitions are required");
    }
    if (!task.corpus || task.corpus->documents.empty() || task.corpus->bytes() == 0) {
        throw MissingFixture("task " + std::string(task_name(task.kind)) + ": corpus is empty");
    }
    const bool needs_model = task.kind == TaskKind::encode || task.kind == TaskKind::encode_offsets ||
                             task.kind == TaskKind::encode_batch;
    if (needs_model && !task.model) {
        throw MissingFixture("task " + std::string(task_name(task.kind)) + ": no BPE model");
    }
}

}  // namespace

std::string_view task_name(TaskKind kind) noexcept {
    switch (kind) {
        case TaskKind::pretokenize_only: return "pretokenize-only";
        case TaskKind::encode: return "encode";
        case TaskKind::encode_offsets: return "encode-offsets";
        case TaskKind::encode_batch: return "encode-batch";
        case TaskKind::train: return "train";
    }
    return "?";
}

std::size_t Corpus::bytes() const noexcept {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.size();
    return n;
}

std::uint64_t run_once(const BenchTask& task) {
    const auto& docs = task.corpus->documents;
    std::uint64_t checksum = 0;
    switch (task.kind) {
        case TaskKind::pretokenize_only:
            for (const auto& d : docs) checksum += bpe::split(task.backend, d).size();
            break;
        case TaskKind::encode:
            for (const auto& d : docs) checksum += bpe::encode(*task.model, d, task.backend).ids.size();
            break;
        case TaskKind::encode_offsets:
            for (const auto& d : docs) {
                const auto enc = bpe::encode(*task.model, d, task.backend);
                checksum += enc.offsets.empty() ? 0 : enc.offsets.back().end;
            }
            break;
        case TaskKind::encode_batch:
            for (const auto& enc : bpe::encode_batch(*task.model, docs, task.threads, task.backend))
                checksum += enc.ids.size();
            break;
        case TaskKind::train: {
            bpe::TrainConfig cfg;
            cfg.vocab_size = task.train_vocab_size;
            cfg.threads = task.threads;
            cfg.backend = task.backend;
            checksum += bpe::train_bpe(docs, cfg).merges().size();
            break;
        }
    }
    return checksum;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return sd / std::sqrt(static_cast<double>(xs.size()));
}

BenchReport run_bench(const std::vector<BenchTask>& tasks, const Clock& clock) {
    const Clock now = clock ? clock : Clock(steady_now_ms);
    for (const auto& t : tasks) check_task(t);

    BenchReport report;
    volatile std::uint64_t sink = 0;
    for (const auto& task : tasks) {
        for (int i = 0; i < task.warmup; ++i) sink = sink + run_once(task);

        TaskResult r{task.kind, task.backend, task.corpus->name, task.corpus->bytes(),
                     task.kind == TaskKind::encode_batch || task.kind == TaskKind::train
                         ? task.threads
                         : 1u,
                     {}, 0, 0, 0};
        for (int i = 0; i < task.repetitions; ++i) {
            const double t0 = now();
            sink = sink + run_once(task);
            const double t1 = now();
            if (!(t1 - t0 >= 0.0)) {
                throw ClockError("timing source went backwards during " +
                                 std::string(task_name(task.kind)));
            }
            r.samples_ms.push_back(t1 - t0);
        }
        r.mean_ms = mean(r.samples_ms);
        r.std_error_ms = standard_error(r.samples_ms);
        r.throughput_mb_s = r.mean_ms > 0 ? static_cast<double>(r.input_bytes) / 1e6 / (r.mean_ms / 1e3)
                                          : 0.0;
        report.results.push_back(std::move(r));
    }

    // Ratio per task kind over the first peek2 and oracle results.
    for (const auto& r : report.results) {
        if (r.backend != bpe::Backend::peek2) continue;
        bool seen = false;
        for (const auto& q : report.ratios) seen = seen || q.kind == r.kind;
        if (seen) continue;
        for (const auto& o : report.results) {
            if (o.kind == r.kind && o.backend == bpe::Backend::oracle && o.input_bytes == r.input_bytes) {
                report.ratios.push_back({r.kind, mean(o.samples_ms) / mean(r.samples_ms),
                                         reference_ratio(r.kind)});
                break;
            }
        }
    }
    return report;
}

std::string format_table(const BenchReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %-7s %12s %14s %12s %8s %7s\n", "task", "impl",
                  "MB/s", "time (ms)", "stderr (ms)", "bytes", "threads");
    os << line;
    for (const auto& r : report.results) {
        std::snprintf(line, sizeof line, "%-18s %-7s %12.6f %14.6f %12.6f %8zu %7u\n",
                      std::string(task_name(r.kind)).c_str(),
                      std::string(bpe::backend_name(r.backend)).c_str(), r.throughput_mb_s,
                      r.mean_ms, r.std_error_ms, r.input_bytes, r.threads);
        os << line;
    }
    if (!report.ratios.empty()) {
        os << "\npeek2 / oracle throughput\n";
        for (const auto& q : report.ratios) {
            if (q.reference) {
                std::snprintf(line, sizeof line, "%-18s %8.3fx   (reference %.3fx)\n",
                              std::string(task_name(q.kind)).c_str(), q.ratio, *q.reference);
            } else {
                std::snprintf(line, sizeof line, "%-18s %8.3fx\n",
                              std::string(task_name(q.kind)).c_str(), q.ratio);
            }
            os << line;
        }
    }
    return os.str();
}

void write_jsonl(std::ostream& out, const BenchReport& report) {
    using nlohmann::json;
    for (const auto& r : report.results) {
        json j{{"type", "result"},
               {"task", task_name(r.kind)},
               {"impl", bpe::backend_name(r.backend)},
               {"corpus", r.corpus},
               {"input_bytes", r.input_bytes},
               {"threads", r.threads},
               {"samples_ms", r.samples_ms},
               {"mean_ms", r.mean_ms},
               {"std_error_ms", r.std_error_ms},
               {"throughput_mb_s", r.throughput_mb_s}};
        out << j.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
    }
    for (const auto& q : report.ratios) {
        json j{{"type", "ratio"}, {"task", task_name(q.kind)}, {"ratio", q.ratio}};
        j["reference"] = q.reference ? json(*q.reference) : json(nullptr);
        out << j.dump() << "\n";
    }
}

}  // namespace peek2::bench
