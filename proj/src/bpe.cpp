#include "peek2/bpe.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <map>
#include <ostream>
#include <queue>
#include <thread>
#include <unordered_set>

#include "peek2/oracle.hpp"
#include "peek2/utf8.hpp"

namespace peek2::bpe {
namespace {

struct ByteMapping {
    std::array<char32_t, 256> to_visible{};
    std::unordered_map<char32_t, std::uint8_t> to_byte;

    ByteMapping() {
        // Printable Latin-1 bytes map to themselves; the rest are shifted
        // past U+00FF in byte order.
        std::array<bool, 256> direct{};
        for (int b = '!'; b <= '~'; ++b) direct[b] = true;
        for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
        for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
        char32_t next = 256;
        for (int b = 0; b < 256; ++b) {
            to_visible[b] = direct[b] ? static_cast<char32_t>(b) : next++;
            to_byte[to_visible[b]] = static_cast<std::uint8_t>(b);
        }
    }
};

const ByteMapping& byte_mapping() {
    static const ByteMapping m;
    return m;
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, work)));
}

// Runs fn(worker, index) over indices strided across workers; rethrows the
// first worker exception.
template <typename Fn>
void parallel_strided(std::size_t count, unsigned workers, Fn fn) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(0u, i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(w, i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::peek2 ? "peek2" : "oracle";
}

std::vector<Segment> split(Backend backend, std::string_view text) {
    if (backend == Backend::oracle) return oracle::oracle_split(text);
    return pretokenize(text);
}

BpeModel BpeModel::byte_level() {
    std::vector<std::string> tokens;
    tokens.reserve(256);
    for (int b = 0; b < 256; ++b) tokens.emplace_back(1, static_cast<char>(b));
    return from_parts(std::move(tokens), {});
}

BpeModel BpeModel::from_parts(std::vector<std::string> tokens,
                              std::vector<std::pair<std::string, std::string>> merges) {
    BpeModel m;
    m.ids_.reserve(tokens.size());
    for (std::size_t id = 0; id < tokens.size(); ++id) {
        if (tokens[id].empty()) throw InvalidModel("token " + std::to_string(id) + " is empty");
        if (!m.ids_.emplace(tokens[id], static_cast<TokenId>(id)).second) {
            throw InvalidModel("duplicate token '" + bytes_to_visible(tokens[id]) + "'");
        }
    }
    for (int b = 0; b < 256; ++b) {
        const auto it = m.ids_.find(std::string(1, static_cast<char>(b)));
        if (it == m.ids_.end()) {
            throw InvalidModel("single-byte token " + std::to_string(b) + " missing from vocab");
        }
        m.byte_ids_[b] = it->second;
    }
    m.tokens_ = std::move(tokens);

    m.merges_.reserve(merges.size());
    for (std::size_t rank = 0; rank < merges.size(); ++rank) {
        const auto& [left, right] = merges[rank];
        const auto l = m.id_of(left);
        const auto r = m.id_of(right);
        if (!l || !r) {
            throw InvalidModel("merge " + std::to_string(rank) + " references unknown token '" +
                               bytes_to_visible(l ? right : left) + "'");
        }
        const auto merged = m.id_of(left + right);
        if (!merged) {
            throw InvalidModel("merge " + std::to_string(rank) + " result '" +
                               bytes_to_visible(left + right) + "' is not in vocab");
        }
        const MergeRule rule{static_cast<std::uint32_t>(rank), *merged};
        if (!m.merge_index_.emplace(pair_key(*l, *r), rule).second) {
            throw InvalidModel("duplicate merge at rank " + std::to_string(rank));
        }
        m.merges_.emplace_back(*l, *r);
    }
    return m;
}

std::optional<TokenId> BpeModel::id_of(std::string_view bytes) const {
    const auto it = ids_.find(std::string(bytes));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<BpeModel::MergeRule> BpeModel::merge_of(TokenId left, TokenId right) const {
    const auto it = merge_index_.find(pair_key(left, right));
    if (it == merge_index_.end()) return std::nullopt;
    return it->second;
}

namespace {

struct Piece {
    TokenId id;
    std::size_t start;  // byte offset within the segment
};

// Merge loop over a doubly linked list of pieces. Candidates are ordered by
// (rank, position); stale heap entries are skipped on pop.
std::vector<Piece> merge_pieces(const BpeModel& model, std::string_view bytes) {
    const std::size_t n = bytes.size();
    std::vector<Piece> pieces(n);
    std::vector<std::ptrdiff_t> prev(n), next(n);
    std::vector<bool> alive(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        pieces[i] = {model.byte_token(static_cast<std::uint8_t>(bytes[i])), i};
        prev[i] = static_cast<std::ptrdiff_t>(i) - 1;
        next[i] = i + 1 < n ? static_cast<std::ptrdiff_t>(i + 1) : -1;
    }

    struct Candidate {
        std::uint32_t rank;
        std::size_t left;
        TokenId left_id;
        TokenId right_id;
        TokenId merged;
        bool operator>(const Candidate& o) const {
            return rank != o.rank ? rank > o.rank : left > o.left;
        }
    };
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
    auto consider = [&](std::ptrdiff_t l) {
        if (l < 0 || next[l] < 0) return;
        const auto r = static_cast<std::size_t>(next[l]);
        if (auto rule = model.merge_of(pieces[l].id, pieces[r].id)) {
            heap.push({rule->rank, static_cast<std::size_t>(l), pieces[l].id, pieces[r].id,
                       rule->merged});
        }
    };
    for (std::size_t i = 0; i + 1 < n; ++i) consider(static_cast<std::ptrdiff_t>(i));

    while (!heap.empty()) {
        const Candidate c = heap.top();
        heap.pop();
        if (!alive[c.left] || pieces[c.left].id != c.left_id || next[c.left] < 0) continue;
        const auto r = static_cast<std::size_t>(next[c.left]);
        if (pieces[r].id != c.right_id) continue;
        pieces[c.left].id = c.merged;
        alive[r] = false;
        next[c.left] = next[r];
        if (next[r] >= 0) prev[next[r]] = static_cast<std::ptrdiff_t>(c.left);
        consider(prev[c.left]);
        consider(static_cast<std::ptrdiff_t>(c.left));
    }

    std::vector<Piece> out;
    for (std::ptrdiff_t i = n ? 0 : -1; i >= 0; i = next[i]) out.push_back(pieces[i]);
    return out;
}

}  // namespace

std::vector<TokenId> encode_segment(const BpeModel& model, std::string_view bytes) {
    std::vector<TokenId> ids;
    for (const auto& p : merge_pieces(model, bytes)) ids.push_back(p.id);
    return ids;
}

Encoding encode(const BpeModel& model, std::string_view text, Backend backend) {
    Encoding enc;
    for (const auto& seg : split(backend, text)) {
        const auto pieces = merge_pieces(model, text.substr(seg.start, seg.size()));
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            const std::size_t end = k + 1 < pieces.size() ? pieces[k + 1].start : seg.size();
            enc.ids.push_back(pieces[k].id);
            enc.offsets.push_back({seg.start + pieces[k].start, seg.start + end});
        }
    }
    return enc;
}

std::vector<Encoding> encode_batch(const BpeModel& model, const std::vector<std::string>& documents,
                                   unsigned threads, Backend backend) {
    std::vector<Encoding> out(documents.size());
    parallel_strided(documents.size(), resolve_threads(threads, documents.size()),
                     [&](unsigned, std::size_t i) {
                         try {
                             out[i] = encode(model, documents[i], backend);
                         } catch (const InvalidUtf8& e) {
                             throw BatchError(i, e.what());
                         }
                     });
    return out;
}

std::string decode(const BpeModel& model, std::span<const TokenId> ids) {
    std::string out;
    for (TokenId id : ids) out += model.token(id);
    return out;
}

BpeModel train_bpe(const std::vector<std::string>& corpus, const TrainConfig& config) {
    if (config.vocab_size < 256) throw std::invalid_argument("vocab_size must be at least 256");
    if (corpus.empty()) throw std::invalid_argument("training corpus is empty");

    // Segment multiset. Per-worker maps summed afterwards; the sum does not
    // depend on how documents were distributed.
    const unsigned workers = resolve_threads(config.threads, corpus.size());
    std::vector<std::unordered_map<std::string, std::uint64_t>> local(workers);
    parallel_strided(corpus.size(), workers, [&](unsigned w, std::size_t i) {
        const std::string_view doc = corpus[i];
        for (const auto& seg : split(config.backend, doc)) ++local[w][std::string(doc.substr(seg.start, seg.size()))];
    });
    std::map<std::string, std::uint64_t> segment_counts;
    for (auto& m : local)
        for (auto& [s, c] : m) segment_counts[s] += c;

    std::vector<std::string> tokens;
    std::unordered_map<std::string, TokenId> ids;
    for (int b = 0; b < 256; ++b) {
        tokens.emplace_back(1, static_cast<char>(b));
        ids.emplace(tokens.back(), static_cast<TokenId>(b));
    }

    std::vector<std::vector<TokenId>> words;
    std::vector<std::uint64_t> counts;
    for (const auto& [s, c] : segment_counts) {
        std::vector<TokenId> w;
        for (unsigned char b : s) w.push_back(b);
        words.push_back(std::move(w));
        counts.push_back(c);
    }

    auto key = [](TokenId l, TokenId r) { return (static_cast<std::uint64_t>(l) << 32) | r; };
    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where;
    std::unordered_set<std::uint64_t> merged_pairs;

    auto add_pairs = [&](std::uint32_t w) {
        const auto& s = words[w];
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const auto k = key(s[i], s[i + 1]);
            if (merged_pairs.count(k)) continue;
            pair_counts[k] += counts[w];
            where[k].push_back(w);
        }
    };
    auto remove_pairs = [&](std::uint32_t w) {
        const auto& s = words[w];
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const auto k = key(s[i], s[i + 1]);
            const auto it = pair_counts.find(k);
            if (it == pair_counts.end()) continue;
            it->second -= counts[w];
            if (it->second == 0) pair_counts.erase(it);
        }
    };
    for (std::uint32_t w = 0; w < words.size(); ++w) add_pairs(w);

    std::vector<std::pair<std::string, std::string>> merges;
    std::vector<std::uint32_t> stamp(words.size(), 0);
    std::uint32_t round = 0;
    while (tokens.size() < config.vocab_size) {
        const std::pair<const std::uint64_t, std::uint64_t>* best = nullptr;
        for (const auto& entry : pair_counts) {
            if (best == nullptr || entry.second > best->second) {
                best = &entry;
                continue;
            }
            if (entry.second < best->second) continue;
            const auto& el = tokens[entry.first >> 32];
            const auto& bl = tokens[best->first >> 32];
            if (el != bl) {
                if (el < bl) best = &entry;
                continue;
            }
            if (tokens[entry.first & 0xFFFFFFFFu] < tokens[best->first & 0xFFFFFFFFu]) best = &entry;
        }
        if (best == nullptr || best->second < config.min_frequency) break;

        const std::uint64_t k = best->first;
        const auto left = static_cast<TokenId>(k >> 32);
        const auto right = static_cast<TokenId>(k & 0xFFFFFFFFu);
        std::string joined = tokens[left] + tokens[right];
        TokenId merged;
        if (const auto it = ids.find(joined); it != ids.end()) {
            merged = it->second;
        } else {
            merged = static_cast<TokenId>(tokens.size());
            ids.emplace(joined, merged);
            tokens.push_back(std::move(joined));
        }
        merges.emplace_back(tokens[left], tokens[right]);
        merged_pairs.insert(k);
        pair_counts.erase(k);

        ++round;
        const auto affected = std::move(where[k]);
        where.erase(k);
        for (std::uint32_t w : affected) {
            if (stamp[w] == round) continue;
            stamp[w] = round;
            auto& s = words[w];
            bool present = false;
            for (std::size_t i = 0; i + 1 < s.size() && !present; ++i)
                present = s[i] == left && s[i + 1] == right;
            if (!present) continue;
            remove_pairs(w);
            std::vector<TokenId> rewritten;
            rewritten.reserve(s.size());
            for (std::size_t i = 0; i < s.size();) {
                if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
                    rewritten.push_back(merged);
                    i += 2;
                } else {
                    rewritten.push_back(s[i++]);
                }
            }
            s = std::move(rewritten);
            add_pairs(w);
        }
    }
    return BpeModel::from_parts(std::move(tokens), std::move(merges));
}

std::string bytes_to_visible(std::string_view bytes) {
    const auto& m = byte_mapping();
    std::string out;
    for (unsigned char b : bytes) utf8::append(out, m.to_visible[b]);
    return out;
}

std::string visible_to_bytes(std::string_view visible) {
    const auto& m = byte_mapping();
    std::string out;
    std::u32string scalars;
    try {
        scalars = utf8::decode_all(visible);
    } catch (const InvalidUtf8& e) {
        throw ParseError(std::string("token is not UTF-8: ") + e.what());
    }
    for (char32_t c : scalars) {
        const auto it = m.to_byte.find(c);
        if (it == m.to_byte.end()) {
            throw ParseError("code point U+" + std::to_string(static_cast<unsigned>(c)) +
                             " is outside the byte-level alphabet");
        }
        out.push_back(static_cast<char>(it->second));
    }
    return out;
}

BpeModel load_model(std::istream& vocab_json, std::istream& merges_text) {
    nlohmann::json vocab;
    try {
        vocab = nlohmann::json::parse(vocab_json);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("vocab: ") + e.what());
    }
    if (!vocab.is_object()) throw ParseError("vocab: expected a JSON object");

    std::vector<std::optional<std::string>> by_id(vocab.size());
    for (const auto& [visible, id_json] : vocab.items()) {
        if (!id_json.is_number_unsigned()) {
            throw ParseError("vocab: id for '" + visible + "' is not a non-negative integer");
        }
        const auto id = id_json.get<std::uint64_t>();
        if (id >= by_id.size()) {
            throw InvalidModel("vocab: ids are not dense (id " + std::to_string(id) + " with " +
                               std::to_string(by_id.size()) + " tokens)");
        }
        if (by_id[id]) throw InvalidModel("vocab: duplicate id " + std::to_string(id));
        by_id[id] = visible_to_bytes(visible);
    }
    std::vector<std::string> tokens;
    tokens.reserve(by_id.size());
    for (auto& t : by_id) tokens.push_back(std::move(*t));

    std::vector<std::pair<std::string, std::string>> merges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(merges_text, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.starts_with("#version"))) continue;
        const auto space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
            line.find(' ', space + 1) != std::string::npos) {
            throw ParseError("merges line " + std::to_string(line_no) +
                             ": expected '<left> <right>'");
        }
        merges.emplace_back(visible_to_bytes(line.substr(0, space)),
                            visible_to_bytes(line.substr(space + 1)));
    }
    return BpeModel::from_parts(std::move(tokens), std::move(merges));
}

BpeModel load_model(const std::filesystem::path& vocab_path,
                    const std::filesystem::path& merges_path) {
    std::ifstream vocab(vocab_path, std::ios::binary);
    if (!vocab) throw ParseError("cannot open " + vocab_path.string());
    std::ifstream merges(merges_path, std::ios::binary);
    if (!merges) throw ParseError("cannot open " + merges_path.string());
    return load_model(vocab, merges);
}

void save_vocab(std::ostream& out, const BpeModel& model) {
    // Written in id order so the file diffs cleanly.
    out << "{";
    for (std::size_t id = 0; id < model.vocab_size(); ++id) {
        out << (id ? ",\n  " : "\n  ")
            << nlohmann::json(bytes_to_visible(model.token(static_cast<TokenId>(id)))).dump()
            << ": " << id;
    }
    out << "\n}\n";
}

void save_merges(std::ostream& out, const BpeModel& model) {
    out << "#version: 0.2\n";
    for (const auto& [l, r] : model.merges()) {
        out << bytes_to_visible(model.token(l)) << ' ' << bytes_to_visible(model.token(r)) << '\n';
    }
}

void save_model(const BpeModel& model, const std::filesystem::path& vocab_path,
                const std::filesystem::path& merges_path) {
    std::ofstream vocab(vocab_path, std::ios::binary);
    std::ofstream merges(merges_path, std::ios::binary);
    if (!vocab || !merges) throw std::runtime_error("cannot write model files");
    save_vocab(vocab, model);
    save_merges(merges, model);
}

}  // namespace peek2::bpe
