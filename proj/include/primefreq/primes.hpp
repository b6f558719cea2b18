#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "primefreq/errors.hpp"

namespace primefreq {

// Ordered sequence of primes with amortized on-demand extension.
//
// Growth uses a segmented sieve of Eratosthenes. The target limit for the
// n-th prime is the Rosser-type bound p_n <= n (ln n + ln ln n) for n >= 6
// (limit 15 covers n < 6); if the estimate ever falls short the limit is
// doubled and sieving resumes from where it stopped.
//
// The table is safe to share between threads: reads take a shared lock,
// growth takes an exclusive lock, and a completed growth step leaves the
// values immutable until the next one.
class PrimeTable {
public:
    static constexpr std::uint64_t kDefaultSieveCap = std::uint64_t{1} << 40;
    static constexpr char kCacheMagic[5] = {'P', 'R', 'I', 'M', '1'};

    explicit PrimeTable(std::uint64_t sieve_cap = kDefaultSieveCap)
        : sieve_cap_(sieve_cap) {}

    PrimeTable(const PrimeTable& other) : sieve_cap_(other.sieve_cap_) {
        std::shared_lock lock(other.mutex_);
        values_ = other.values_;
        sieve_limit_ = other.sieve_limit_;
    }
    PrimeTable& operator=(const PrimeTable&) = delete;

    /// Grow until at least `m` primes are available. Existing entries are
    /// never touched; calling with a smaller count is a no-op.
    void ensure_count(std::size_t m) {
        if (m == 0) return;
        {
            std::shared_lock lock(mutex_);
            if (values_.size() >= m) return;
        }
        std::unique_lock lock(mutex_);
        while (values_.size() < m) {
            std::uint64_t target = std::max(limit_estimate(m), sieve_limit_ * 2);
            if (target > sieve_cap_) {
                throw resource_exhausted_error(
                    "prime sieve limit " + std::to_string(target) +
                    " exceeds cap " + std::to_string(sieve_cap_));
            }
            sieve_to(target);
        }
    }

    std::size_t count() const {
        std::shared_lock lock(mutex_);
        return values_.size();
    }

    std::uint64_t sieve_limit() const {
        std::shared_lock lock(mutex_);
        return sieve_limit_;
    }

    /// The (i+1)-th prime; extends the table when needed.
    std::uint64_t nth(std::size_t i) {
        ensure_count(i + 1);
        std::shared_lock lock(mutex_);
        return values_[i];
    }

    /// Copy of the first `m` primes.
    std::vector<std::uint64_t> first(std::size_t m) {
        ensure_count(m);
        std::shared_lock lock(mutex_);
        return {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(m)};
    }

    /// Square roots of the first `m` primes, recomputed on every call so
    /// the table itself stays purely integral.
    std::vector<double> slice_roots(std::size_t m) {
        if (m == 0) throw empty_input_error("slice_roots requires m >= 1");
        ensure_count(m);
        std::shared_lock lock(mutex_);
        std::vector<double> roots(m);
        for (std::size_t i = 0; i < m; ++i) {
            roots[i] = std::sqrt(static_cast<double>(values_[i]));
        }
        return roots;
    }

    // ------------------------------------------------------------------
    // Binary cache: "PRIM1" magic, u64 count, then count u64 primes, all
    // little-endian. Lets CLI runs skip re-sieving.
    // ------------------------------------------------------------------

    void save_cache(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open prime cache for writing: " + path);
        std::shared_lock lock(mutex_);
        out.write(kCacheMagic, sizeof(kCacheMagic));
        write_u64(out, values_.size());
        for (std::uint64_t p : values_) write_u64(out, p);
        if (!out) throw io_error("short write to prime cache: " + path);
    }

    static PrimeTable load_cache(const std::string& path,
                                 std::uint64_t sieve_cap = kDefaultSieveCap) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw io_error("cannot open prime cache: " + path);
        char magic[sizeof(kCacheMagic)];
        in.read(magic, sizeof(magic));
        if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
            throw io_error("bad prime cache magic: " + path);
        }
        const std::uint64_t n = read_u64(in);
        PrimeTable table(sieve_cap);
        table.values_.reserve(n);
        std::uint64_t prev = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t p = read_u64(in);
            if (!in) throw io_error("truncated prime cache: " + path);
            if (p <= prev || (i == 0 && p != 2)) {
                throw io_error("corrupt prime cache (not an ascending prime list): " + path);
            }
            table.values_.push_back(p);
            prev = p;
        }
        // A contiguous prime list accounts for every prime up to its last
        // entry, so that entry is a valid sieve limit.
        table.sieve_limit_ = table.values_.empty() ? 1 : table.values_.back();
        return table;
    }

private:
    static std::uint64_t limit_estimate(std::size_t n) {
        if (n < 6) return 15;
        const double nd = static_cast<double>(n);
        const double bound = nd * (std::log(nd) + std::log(std::log(nd)));
        return static_cast<std::uint64_t>(std::ceil(bound));
    }

    // Append all primes in (sieve_limit_, limit] using segments so memory
    // stays proportional to the segment, not the limit.
    void sieve_to(std::uint64_t limit) {
        if (limit <= sieve_limit_) return;
        const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
        const std::vector<std::uint64_t> base = simple_sieve(root);

        constexpr std::uint64_t kSegment = std::uint64_t{1} << 20;
        std::vector<std::uint8_t> composite;
        std::uint64_t lo = std::max<std::uint64_t>(sieve_limit_ + 1, 2);
        while (lo <= limit) {
            const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
            composite.assign(hi - lo + 1, 0);
            for (std::uint64_t p : base) {
                if (p * p > hi) break;
                std::uint64_t start = ((lo + p - 1) / p) * p;
                start = std::max(start, p * p);
                for (std::uint64_t x = start; x <= hi; x += p) {
                    composite[x - lo] = 1;
                }
            }
            for (std::uint64_t x = lo; x <= hi; ++x) {
                if (!composite[x - lo]) values_.push_back(x);
            }
            lo = hi + 1;
        }
        sieve_limit_ = limit;
    }

    static std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
        std::vector<std::uint8_t> composite(limit + 1, 0);
        std::vector<std::uint64_t> primes;
        for (std::uint64_t p = 2; p <= limit; ++p) {
            if (composite[p]) continue;
            primes.push_back(p);
            for (std::uint64_t x = p * p; x <= limit; x += p) composite[x] = 1;
        }
        return primes;
    }

    static void write_u64(std::ostream& out, std::uint64_t v) {
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(bytes, 8);
    }

    static std::uint64_t read_u64(std::istream& in) {
        unsigned char bytes[8] = {};
        in.read(reinterpret_cast<char*>(bytes), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
        return v;
    }

    mutable std::shared_mutex mutex_;
    std::vector<std::uint64_t> values_;
    std::uint64_t sieve_limit_ = 1;
    std::uint64_t sieve_cap_;
};

} // namespace primefreq
