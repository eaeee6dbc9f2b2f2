#pragma once

// On-disk cache of sieve tables and prime classifications.
//
// Layout (host byte order):
//   char[8]  magic "HZCACHE\n"
//   u32      format version
//   u32      entry count
//   entries: u32 kind, u64 key1, u64 key2, u64 payload bytes, payload
//
// kind 1 (sieve):   key1 = N, payload = u32 spf[0..N]
// kind 2 (classes): key1 = b, key2 = P, payload = u64 class count, then per
//                   class a u64 length followed by the primes
//
// A file with the wrong magic or version is ignored wholesale. Entries are
// looked up by exact key, so a different N, b or P is a miss and is
// recomputed and appended.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hzeta/dirichlet.hpp"
#include "hzeta/squareclass.hpp"

namespace hzeta {

inline constexpr char kCacheMagic[8] = {'H', 'Z', 'C', 'A', 'C', 'H', 'E', '\n'};
inline constexpr std::uint32_t kCacheVersion = 1;

class Cache {
 public:
  enum Kind : std::uint32_t { kSieve = 1, kClasses = 2 };

  explicit Cache(std::filesystem::path path) : path_(std::move(path)) {
    load();
  }

  Cache(const Cache&) = delete;
  Cache& operator=(const Cache&) = delete;

  ~Cache() {
    try {
      flush();
    } catch (...) {
    }
  }

  SieveTables sieve(u64 limit) {
    std::lock_guard lock(mu_);
    const Key key{kSieve, limit, 0};
    if (auto it = entries_.find(key); it != entries_.end()) {
      std::vector<std::uint32_t> spf(it->second.size() / sizeof(std::uint32_t));
      std::memcpy(spf.data(), it->second.data(), it->second.size());
      try {
        SieveTables t = SieveTables::from_spf(std::move(spf));
        if (t.limit() == limit) {
          ++hits_;
          return t;
        }
      } catch (const std::exception&) {
      }
    }
    ++misses_;
    SieveTables t(limit);
    const auto& spf = t.spf_table();
    std::string bytes(spf.size() * sizeof(std::uint32_t), '\0');
    std::memcpy(bytes.data(), spf.data(), bytes.size());
    entries_[key] = std::move(bytes);
    dirty_ = true;
    return t;
  }

  PrimeClasses classes(u64 b, u64 prime_limit) {
    std::lock_guard lock(mu_);
    const Key key{kClasses, b, prime_limit};
    if (auto it = entries_.find(key); it != entries_.end()) {
      if (auto pc = decode_classes(b, prime_limit, it->second)) {
        ++hits_;
        return *pc;
      }
    }
    ++misses_;
    if (!primes_ || primes_limit_ != prime_limit) {
      primes_ = std::make_shared<std::vector<u64>>(primes_up_to(prime_limit));
      primes_limit_ = prime_limit;
    }
    PrimeClasses pc = classify_primes(b, prime_limit, *primes_);
    entries_[key] = encode_classes(pc);
    dirty_ = true;
    return pc;
  }

  void flush() {
    std::lock_guard lock(mu_);
    if (!dirty_) return;
    const auto tmp = path_.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write cache " + tmp);
      out.write(kCacheMagic, sizeof kCacheMagic);
      put<std::uint32_t>(out, kCacheVersion);
      put<std::uint32_t>(out, static_cast<std::uint32_t>(entries_.size()));
      for (const auto& [key, payload] : entries_) {
        put<std::uint32_t>(out, std::get<0>(key));
        put<u64>(out, std::get<1>(key));
        put<u64>(out, std::get<2>(key));
        put<u64>(out, payload.size());
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
      }
    }
    std::filesystem::rename(tmp, path_);
    dirty_ = false;
  }

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::tuple<std::uint32_t, u64, u64>;

  template <typename T>
  static void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  }

  template <typename T>
  static bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
  }

  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    char magic[8];
    std::uint32_t version = 0;
    std::uint32_t count = 0;
    if (!in.read(magic, sizeof magic) ||
        std::memcmp(magic, kCacheMagic, sizeof magic) != 0 ||
        !get(in, version) || version != kCacheVersion || !get(in, count)) {
      dirty_ = true;  // rewrite in the current format
      return;
    }
    std::map<Key, std::string> loaded;
    for (std::uint32_t i = 0; i < count; ++i) {
      std::uint32_t kind = 0;
      u64 k1 = 0, k2 = 0, n = 0;
      if (!get(in, kind) || !get(in, k1) || !get(in, k2) || !get(in, n)) {
        dirty_ = true;
        return;
      }
      std::string payload(n, '\0');
      if (!in.read(payload.data(), static_cast<std::streamsize>(n))) {
        dirty_ = true;
        return;
      }
      loaded[{kind, k1, k2}] = std::move(payload);
    }
    entries_ = std::move(loaded);
  }

  static std::string encode_classes(const PrimeClasses& pc) {
    std::vector<u64> words{pc.by_class.size()};
    for (const auto& cls : pc.by_class) {
      words.push_back(cls.size());
      words.insert(words.end(), cls.begin(), cls.end());
    }
    std::string bytes(words.size() * sizeof(u64), '\0');
    std::memcpy(bytes.data(), words.data(), bytes.size());
    return bytes;
  }

  static std::optional<PrimeClasses> decode_classes(u64 b, u64 prime_limit,
                                                    const std::string& bytes) {
    if (bytes.size() % sizeof(u64) != 0) return std::nullopt;
    std::vector<u64> words(bytes.size() / sizeof(u64));
    std::memcpy(words.data(), bytes.data(), bytes.size());
    PrimeClasses pc{b, prime_limit, SquareUnitGroup(b), prime_divisors(b), {}};
    std::size_t pos = 0;
    if (words.empty() || words[pos++] != pc.group.size()) return std::nullopt;
    for (std::size_t c = 0; c < pc.group.size(); ++c) {
      if (pos >= words.size()) return std::nullopt;
      const u64 len = words[pos++];
      if (pos + len > words.size()) return std::nullopt;
      pc.by_class.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(pos),
                               words.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
    if (pos != words.size()) return std::nullopt;
    return pc;
  }

  std::filesystem::path path_;
  std::map<Key, std::string> entries_;
  std::shared_ptr<std::vector<u64>> primes_;
  u64 primes_limit_ = 0;
  bool dirty_ = false;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
  std::mutex mu_;
};

}  // namespace hzeta
