#include "sdp/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include <unistd.h>

namespace sdp {

bool Bounds::contains(const DecisionVector& x) const noexcept
{
    if (x.size() != lower.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower[i] && x[i] <= upper[i])) {
            return false;
        }
    }
    return true;
}

TimeContext::TimeContext(int severity_, int frequency_, int warmup_)
    : severity(severity_), frequency(frequency_), warmup(warmup_)
{
    if (severity < 1) {
        throw std::invalid_argument("severity must be a positive integer, got " + std::to_string(severity));
    }
    if (frequency < 1) {
        throw std::invalid_argument("frequency must be a positive integer, got " + std::to_string(frequency));
    }
    if (warmup < 0) {
        throw std::invalid_argument("warmup must be non-negative, got " + std::to_string(warmup));
    }
}

std::size_t TimeContext::time_index(std::size_t tau) const noexcept
{
    auto w = static_cast<std::size_t>(warmup);
    if (tau < w) {
        return 0;
    }
    return (tau - w) / static_cast<std::size_t>(frequency);
}

double TimeContext::time_at_index(std::size_t index) const noexcept
{
    return static_cast<double>(index) / static_cast<double>(severity);
}

double TimeContext::time_of(std::size_t tau) const noexcept
{
    return time_at_index(time_index(tau));
}

bool TimeContext::is_change(std::size_t tau) const noexcept
{
    return tau > 0 && time_index(tau) != time_index(tau - 1);
}

std::size_t time_index_for(double t, int severity)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("time must be finite and non-negative, got " + std::to_string(t));
    }
    double scaled = t * severity;
    double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) <= 1e-9) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(scaled));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t RandomStream::bits(const StreamId& id) const noexcept
{
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(id.problem) * 0xd1342543de82ef95ULL));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(id.tag) * 0xaf251af3b0f025b5ULL));
    h = splitmix64(h ^ id.time);
    h = splitmix64(h ^ (id.variable * 0x9e6c63d0676a9a99ULL));
    return h;
}

double RandomStream::uniform(const StreamId& id) const noexcept
{
    return static_cast<double>(bits(id) >> 11) * 0x1.0p-53;
}

long RandomStream::randint(const StreamId& id, long a, long b) const
{
    if (a > b) {
        throw std::invalid_argument("randint: empty range [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    auto span = static_cast<double>(b - a) + 1.0;
    auto offset = static_cast<long>(std::floor(uniform(id) * span));
    return std::min(a + offset, b);
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) noexcept
{
    auto bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ostringstream suffix;
    suffix << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    auto tmp = path;
    tmp += suffix.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace sdp
