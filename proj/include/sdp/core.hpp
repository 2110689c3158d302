#ifndef SDP_CORE_HPP
#define SDP_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sdp {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;

/// Per-variable box constraints. `lower[i] < upper[i]` for every i.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const noexcept { return lower.size(); }
    bool contains(const DecisionVector& x) const noexcept;
};

/// Maps the generation counter to the discrete problem time.
///
/// t(tau) = floor(max(0, tau - warmup) / frequency) / severity
///
/// `severity` is the number of environmental changes per unit of t and
/// `frequency` the number of generations each environment lasts.
struct TimeContext {
    int severity = 10;
    int frequency = 10;
    int warmup = 50;

    TimeContext() = default;
    TimeContext(int severity, int frequency, int warmup);

    /// Number of changes that happened before generation `tau`.
    std::size_t time_index(std::size_t tau) const noexcept;
    double time_of(std::size_t tau) const noexcept;
    double time_at_index(std::size_t index) const noexcept;
    /// True when generation `tau` is the first one of a new environment.
    bool is_change(std::size_t tau) const noexcept;
};

/// Time index of the environment a real-valued t belongs to.
/// Values are snapped to the nearest index when within 1e-9.
std::size_t time_index_for(double t, int severity);

/// Identifies one random quantity of one problem at one time step.
enum class StreamTag : std::uint32_t {
    walk_step = 1,
    walk_fallback = 2,
    mix_sign = 3,
    global_basin = 4,
    variable_count = 5,
    objective_count = 6,
    degeneration_level = 7,
    degeneration_rotation = 8,
};

struct StreamId {
    std::uint32_t problem = 0;
    StreamTag tag = StreamTag::walk_step;
    std::uint64_t time = 0;
    std::uint64_t variable = 0;
};

/// Counter-based generator: every value is a pure function of the seed
/// and the stream id, so state at any time index can be queried without
/// replaying history.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t bits(const StreamId& id) const noexcept;
    /// Uniform on [0, 1).
    double uniform(const StreamId& id) const noexcept;
    /// Uniform integer on [a, b]; throws std::invalid_argument if a > b.
    long randint(const StreamId& id, long a, long b) const;

private:
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;

/// Writes via a temporary sibling and rename, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

} // namespace sdp

#endif
