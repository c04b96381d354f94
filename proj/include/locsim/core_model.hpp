#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace locsim {

/// Smallest accepted per-transmission success probability. Deficits and
/// shortages scale with 1/p, so tiny values are rejected up front.
inline constexpr double kMinSuccessProbability = 0.01;

/// Subsets are checked exhaustively up to this many clients.
inline constexpr std::size_t kExhaustiveSubsetLimit = 16;

/// Slack below -kFeasibilityTolerance counts as a violated constraint.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct ClientParams {
    int id = 1;      // 1-based
    double p = 1.0;  // per-transmission success probability
    double q = 0.0;  // required delivery ratio over the window
};

/// Loss-of-credibility cost C(x). Zero for x <= 0, x^2 or x^k above.
struct CostSpec {
    enum class Kind { quadratic, power };

    Kind kind = Kind::quadratic;
    double exponent = 2.0;

    static CostSpec quadratic() { return {}; }
    /// Throws ConfigError unless k > 1.
    static CostSpec power(double k);

    double operator()(double x) const;

    /// "quadratic" or "power:<k>", the same spelling the config file takes.
    std::string to_string() const;
};

struct SystemConfig {
    int tau = 20;           // slots per interval
    int window_T = 100;     // credibility window, in intervals
    std::vector<ClientParams> clients;
    double epsilon = 5.0;   // MDVF penalty weight
    CostSpec cost;
    std::int64_t horizon = 10'000;  // simulated intervals
    std::uint64_t seed = 1;

    std::size_t size() const { return clients.size(); }
    std::vector<double> success_probabilities() const;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

/// Distribution of W_S, the number of slots a work-conserving server needs to
/// deliver one packet to every client of S, truncated at tau.
struct WorkPmf {
    int tau = 0;
    std::vector<double> mass;  // mass[w] = P(W_S = w), w < tau
    double tail = 0.0;         // P(W_S >= tau)
};

/// Exact pmf of a sum of independent geometric transmission counts.
/// `subset` holds 0-based client indices into `p`.
WorkPmf work_pmf(std::span<const std::size_t> subset, int tau, std::span<const double> p);

/// Expected idle slots per interval when only `subset` has packets.
double idle_time(const WorkPmf& pmf);
double idle_time(std::span<const std::size_t> subset, int tau, std::span<const double> p);

enum class SubsetDepth {
    automatic,   // exhaustive for N <= kExhaustiveSubsetLimit, partial otherwise
    exhaustive,  // every nonempty subset
    partial,     // full set, singletons and pairs
};

struct SubsetViolation {
    std::vector<int> client_ids;  // ascending, 1-based
    double slack = 0.0;           // (tau - I_S) - sum_{i in S} xbar_i / p_i
};

struct FeasibilityReport {
    bool feasible = true;
    /// False when only singletons, pairs and the full set were checked.
    bool exhaustive = true;
    std::size_t subsets_checked = 0;
    std::vector<int> out_of_range;  // ids whose target lies outside [0, 1]
    std::vector<SubsetViolation> violations;
    /// Tightest slack over proper nonempty subsets; +inf when N = 1.
    double min_proper_slack = std::numeric_limits<double>::infinity();
};

struct ScheduleTargets {
    std::vector<double> xbar_star;  // deliveries per interval
    double idle_full = 0.0;         // I over the full client set
    FeasibilityReport feasibility;

    bool feasible() const { return feasibility.feasible; }
    /// True when every target is in [0, 1], i.e. deficit policies can run.
    bool targets_in_range() const { return feasibility.out_of_range.empty(); }
};

/// Optimal mean timely-throughputs for a given idle time of the full set.
std::vector<double> closed_form_targets(const SystemConfig& config, double idle_full);

ScheduleTargets compute_targets(const SystemConfig& config);

/// Checks 0 <= xbar_i <= 1 and sum_{i in S} xbar_i/p_i <= tau - I_S per subset.
/// Subsets are scanned in parallel; results do not depend on the thread count.
FeasibilityReport validate_feasibility(const SystemConfig& config,
                                       std::span<const double> xbar,
                                       SubsetDepth depth = SubsetDepth::automatic);

namespace serial {
/// Single-threaded reference for locsim::validate_feasibility.
FeasibilityReport validate_feasibility(const SystemConfig& config,
                                       std::span<const double> xbar,
                                       SubsetDepth depth = SubsetDepth::automatic);
} // namespace serial

/// Expected per-interval LoC of one client whose window delivery count is
/// Gaussian with mean xbar*T and variance sigma^2*T:
///   E[C(sigma*sqrt(T)/p * Z + (q - xbar)*T/p)],  Z ~ N(0, 1).
/// Composite Simpson on z in [-8, 8], starting at the kink of C.
double predicted_loc(double xbar, double sigma, const ClientParams& client,
                     int window_T, const CostSpec& cost);

} // namespace locsim
