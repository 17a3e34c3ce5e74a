#include "cforge/enumerate.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace cforge {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        return UINT64_MAX;
    return r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        return UINT64_MAX;
    return r;
}

constexpr int index_of(Type t) { return t == Type::Boolean ? 0 : 1; }

void fill_raw(const Signature& sig, int max_complexity, EnumerationStats& stats)
{
    std::vector<std::array<std::uint64_t, 2>> raw(static_cast<std::size_t>(max_complexity) + 1, {0, 0});
    for (const auto& a : sig.atoms)
        raw[1][index_of(a.type)] += 1;
    raw[1][1] += sig.constants.size();
    for (int k = 2; k <= max_complexity; ++k) {
        for (Op u : sig.unary)
            raw[k][index_of(result_type(u))] =
                sat_add(raw[k][index_of(result_type(u))], raw[k - 1][index_of(operand_type(u))]);
        for (Op b : sig.binary) {
            int in = index_of(operand_type(b));
            for (int i = 1; i <= k - 2; ++i)
                raw[k][index_of(result_type(b))] =
                    sat_add(raw[k][index_of(result_type(b))], sat_mul(raw[i][in], raw[k - 1 - i][in]));
        }
    }
    stats.max_complexity = max_complexity;
    stats.raw.assign(raw.size(), 0);
    stats.raw_boolean.assign(raw.size(), 0);
    stats.raw_number.assign(raw.size(), 0);
    stats.emitted.assign(raw.size(), 0);
    for (std::size_t k = 1; k < raw.size(); ++k) {
        stats.raw_boolean[k] = raw[k][0];
        stats.raw_number[k] = raw[k][1];
        stats.raw[k] = sat_add(raw[k][0], raw[k][1]);
    }
}

void check_complexity(int max_complexity)
{
    if (max_complexity < 1 || max_complexity > kMaxEnumerationComplexity)
        throw Error(ErrorCode::ComplexityOutOfRange,
                    "max complexity must be between 1 and " + std::to_string(kMaxEnumerationComplexity) + ", got " +
                        std::to_string(max_complexity));
}

struct StopEnumeration {};

} // namespace

std::vector<Rational> Signature::default_constants()
{
    return {Rational{1}, Rational{2}, *Rational::make(1, 2)};
}

bool Signature::has_op(Op op) const
{
    return std::find(unary.begin(), unary.end(), op) != unary.end() ||
           std::find(binary.begin(), binary.end(), op) != binary.end();
}

void Signature::validate() const
{
    if (atoms.empty())
        throw Error(ErrorCode::EmptySignature, "signature has no atoms");
    std::set<std::string> names;
    for (const auto& a : atoms)
        if (!names.insert(a.name).second)
            throw Error(ErrorCode::InvalidArgument, "atom '" + a.name + "' listed twice in signature");
    std::set<Op> seen;
    for (Op op : unary)
        if (!is_unary(op) || !seen.insert(op).second)
            throw Error(ErrorCode::InvalidArgument, "bad or repeated unary operator " + std::string(op_name(op)));
    for (Op op : binary)
        if (!is_binary(op) || !seen.insert(op).second)
            throw Error(ErrorCode::InvalidArgument, "bad or repeated binary operator " + std::string(op_name(op)));

    // Types reachable from the leaves under the signature's operators.
    std::array<bool, 2> reachable{false, false};
    for (const auto& a : atoms)
        reachable[index_of(a.type)] = true;
    if (!constants.empty())
        reachable[1] = true;
    for (int round = 0; round < 2; ++round)
        for (Op op : seen)
            if (reachable[index_of(operand_type(op))])
                reachable[index_of(result_type(op))] = true;
    for (Op op : seen)
        if (!reachable[index_of(operand_type(op))])
            throw Error(ErrorCode::TypeError, "operator " + std::string(op_name(op)) + " has no " +
                                                  std::string(to_string(operand_type(op))) +
                                                  " operands in this signature");
}

EnumerationStats raw_counts(const Signature& sig, int max_complexity)
{
    check_complexity(max_complexity);
    EnumerationStats stats;
    fill_raw(sig, max_complexity, stats);
    return stats;
}

EnumerationStats enumerate(ExprArena& arena, const Signature& sig, int max_complexity, const ExprSink& sink,
                           std::optional<Deadline> deadline)
{
    check_complexity(max_complexity);
    sig.validate();

    EnumerationStats stats;
    fill_raw(sig, max_complexity, stats);

    // pools[k][t]: nodes first discovered at level k with type t.
    std::vector<std::array<std::vector<NodeId>, 2>> pools(static_cast<std::size_t>(max_complexity) + 1);
    std::uint32_t ticks = 0;

    // Tracked separately from Made::fresh so a pre-populated arena works too.
    std::vector<bool> seen(arena.size(), false);
    auto emit = [&](ExprArena::Made made, int level) {
        if (made.id >= seen.size())
            seen.resize(std::max<std::size_t>(arena.size(), made.id + 1), false);
        if (seen[made.id])
            return;
        seen[made.id] = true;
        pools[level][index_of(arena.node(made.id).type)].push_back(made.id);
        stats.emitted[level] += 1;
        stats.total_emitted += 1;
        if (!sink(made.id)) {
            stats.stopped = true;
            throw StopEnumeration{};
        }
    };
    auto tick = [&] {
        if (deadline && (++ticks & 0x3FF) == 0 && std::chrono::steady_clock::now() >= *deadline) {
            stats.timed_out = true;
            throw StopEnumeration{};
        }
    };

    try {
        if (deadline && std::chrono::steady_clock::now() >= *deadline) {
            stats.timed_out = true;
            throw StopEnumeration{};
        }
        for (const auto& a : sig.atoms)
            emit(arena.atom(a.name, a.type, 1), 1);
        for (const auto& c : sig.constants)
            emit(arena.constant(c, 1), 1);
        stats.completed_levels = 1;

        for (int k = 2; k <= max_complexity; ++k) {
            for (Op u : sig.unary) {
                const auto& operands = pools[k - 1][index_of(operand_type(u))];
                for (std::size_t i = 0; i < operands.size(); ++i) {
                    tick();
                    emit(arena.unary(u, operands[i], k), k);
                }
            }
            for (Op b : sig.binary) {
                int in = index_of(operand_type(b));
                bool comm = is_commutative(b);
                for (int i = 1; i <= k - 2; ++i) {
                    int j = k - 1 - i;
                    if (comm && i > j)
                        break;
                    const auto& left = pools[i][in];
                    const auto& right = pools[j][in];
                    for (std::size_t x = 0; x < left.size(); ++x) {
                        std::size_t y0 = (comm && i == j) ? x : 0;
                        for (std::size_t y = y0; y < right.size(); ++y) {
                            tick();
                            emit(arena.binary(b, left[x], right[y], k), k);
                        }
                    }
                }
            }
            stats.completed_levels = k;
        }
    } catch (const StopEnumeration&) {
    }
    return stats;
}

} // namespace cforge
