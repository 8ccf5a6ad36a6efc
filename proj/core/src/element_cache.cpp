#include "hpimc/element_cache.hpp"

#include <openssl/sha.h>

#include <bit>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace hpimc {

static_assert(std::endian::native == std::endian::little,
              "cache records are written in host byte order and assume little endian");

Fingerprint fingerprint_of(std::string_view canonical) {
  Fingerprint fp{};
  SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), fp.data());
  return fp;
}

std::string to_hex(const Fingerprint& fp) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(fp.size() * 2);
  for (const auto byte : fp) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0x0f]);
  }
  return out;
}

std::filesystem::path cache_directory(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("HPIMC_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return fallback;
}

ElementCache::ElementCache(const Fingerprint& fingerprint) : fingerprint_(fingerprint) {}

ElementCache::ElementCache(const Fingerprint& fingerprint, std::filesystem::path file)
    : fingerprint_(fingerprint), file_(std::move(file)) {
  load();
}

void ElementCache::require(const Fingerprint& fingerprint) const {
  if (fingerprint != fingerprint_) {
    throw StaleCacheError("element cache fingerprint " + to_hex(fingerprint_) +
                          " does not match context " + to_hex(fingerprint));
  }
}

std::uint64_t ElementCache::key(Index row, Index col) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(row)) << 32) |
         static_cast<std::uint32_t>(col);
}

void ElementCache::load() {
  std::error_code ec;
  if (file_->has_parent_path()) {
    std::filesystem::create_directories(file_->parent_path(), ec);
  }
  const bool exists = std::filesystem::exists(*file_, ec);
  if (exists) {
    std::ifstream in(*file_, std::ios::binary);
    if (!in) {
      throw CacheIoError("cannot open cache file " + file_->string());
    }
    char header[kHeaderBytes];
    in.read(header, kHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes) ||
        std::memcmp(header, kMagic.data(), kMagic.size()) != 0) {
      throw CacheIoError("cache file " + file_->string() + " has a malformed header");
    }
    Fingerprint stored{};
    std::memcpy(stored.data(), header + kMagic.size(), stored.size());
    if (stored != fingerprint_) {
      throw StaleCacheError("cache file " + file_->string() + " was written for fingerprint " +
                            to_hex(stored) + ", expected " + to_hex(fingerprint_));
    }
    char record[kRecordBytes];
    while (in.read(record, kRecordBytes)) {
      std::uint32_t row = 0;
      std::uint32_t col = 0;
      double re = 0.0;
      double im = 0.0;
      std::memcpy(&row, record, 4);
      std::memcpy(&col, record + 4, 4);
      std::memcpy(&re, record + 8, 8);
      std::memcpy(&im, record + 16, 8);
      table_[key(row, col)] = Complex(re, im);
    }
  }
  out_.open(*file_, std::ios::binary | std::ios::app);
  if (!out_) {
    throw CacheIoError("cannot open cache file " + file_->string() + " for appending");
  }
  if (!exists) {
    out_.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    out_.write(reinterpret_cast<const char*>(fingerprint_.data()),
               static_cast<std::streamsize>(fingerprint_.size()));
    out_.flush();
    if (!out_) {
      throw CacheIoError("cannot write cache header to " + file_->string());
    }
  }
}

std::optional<Complex> ElementCache::lookup(Index row, Index col) const {
  std::shared_lock lock(mutex_);
  const auto it = table_.find(key(row, col));
  if (it == table_.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool ElementCache::append(Index row, Index col, Complex value) {
  if (!file_) {
    return true;
  }
  char record[kRecordBytes];
  const auto r = static_cast<std::uint32_t>(row);
  const auto c = static_cast<std::uint32_t>(col);
  const double re = value.real();
  const double im = value.imag();
  std::memcpy(record, &r, 4);
  std::memcpy(record + 4, &c, 4);
  std::memcpy(record + 8, &re, 8);
  std::memcpy(record + 16, &im, 8);
  out_.write(record, kRecordBytes);
  if (!out_) {
    io_failures_.fetch_add(1, std::memory_order_relaxed);
    out_.clear();
    return false;
  }
  return true;
}

bool ElementCache::store(Index row, Index col, Complex value) {
  std::unique_lock lock(mutex_);
  table_[key(row, col)] = value;
  const bool ok = append(row, col, value);
  if (file_) {
    out_.flush();
  }
  return ok;
}

bool ElementCache::store_column(Index col, const StateVector& column) {
  std::unique_lock lock(mutex_);
  bool ok = true;
  for (Index row = 0; row < column.size(); ++row) {
    table_[key(row, col)] = column[row];
    ok = append(row, col, column[row]) && ok;
  }
  if (file_) {
    out_.flush();
    ok = ok && static_cast<bool>(out_);
  }
  return ok;
}

std::size_t ElementCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

CacheStats ElementCache::stats() const {
  return CacheStats{hits_.load(), misses_.load(), io_failures_.load()};
}

}  // namespace hpimc
