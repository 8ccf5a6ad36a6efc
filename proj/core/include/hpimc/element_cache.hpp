#pragma once

#include "hpimc/grid.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace hpimc {

using Fingerprint = std::array<std::uint8_t, 32>;

// SHA-256 of a canonical parameter description.
Fingerprint fingerprint_of(std::string_view canonical);
std::string to_hex(const Fingerprint& fp);

class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CacheIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directory named by HPIMC_CACHE_DIR, else `fallback`.
std::filesystem::path cache_directory(const std::filesystem::path& fallback);

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t io_failures = 0;
};

// Look-up table of propagator matrix elements for one scheme fingerprint.
//
// File layout (little endian): 8-byte magic "HPIMCEC1", 32-byte fingerprint,
// then append-only 24-byte records {u32 row, u32 col, f64 re, f64 im}.
// A trailing partial record (interrupted append) is ignored on load.
// Readers share a lock; writers are exclusive, so no read sees a torn record.
class ElementCache {
 public:
  static constexpr std::string_view kMagic = "HPIMCEC1";
  static constexpr std::size_t kHeaderBytes = 8 + 32;
  static constexpr std::size_t kRecordBytes = 24;

  explicit ElementCache(const Fingerprint& fingerprint);
  // Loads an existing file (StaleCacheError if its fingerprint differs) or creates it.
  ElementCache(const Fingerprint& fingerprint, std::filesystem::path file);

  ElementCache(const ElementCache&) = delete;
  ElementCache& operator=(const ElementCache&) = delete;

  const Fingerprint& fingerprint() const { return fingerprint_; }
  const std::optional<std::filesystem::path>& file() const { return file_; }

  // Throws StaleCacheError when `fingerprint` differs from the cache's own.
  void require(const Fingerprint& fingerprint) const;

  std::optional<Complex> lookup(Index row, Index col) const;
  // Returns false when the record could not be persisted (value still kept in memory).
  bool store(Index row, Index col, Complex value);
  bool store_column(Index col, const StateVector& column);

  std::size_t size() const;
  CacheStats stats() const;
  void count_hit() const { hits_.fetch_add(1, std::memory_order_relaxed); }
  void count_miss() const { misses_.fetch_add(1, std::memory_order_relaxed); }

 private:
  static std::uint64_t key(Index row, Index col);
  void load();
  bool append(Index row, Index col, Complex value);

  Fingerprint fingerprint_;
  std::optional<std::filesystem::path> file_;
  std::ofstream out_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, Complex> table_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
  std::atomic<std::uint64_t> io_failures_{0};
};

}  // namespace hpimc
