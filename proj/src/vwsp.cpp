#include "wfsat/vwsp.hpp"

#include "wfsat/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace wfsat {

std::size_t ClassicalConstraint::magnitude(std::size_t distinct_users) const noexcept
{
    const std::size_t d = distinct_users;
    std::size_t base = 0;
    switch (kind) {
    case ConstraintKind::sod:
        base = d <= 1 ? 1 : 0;
        break;
    case ConstraintKind::bod:
        base = d >= 2 ? 1 : 0;
        break;
    case ConstraintKind::at_most:
        base = d > k ? d - k : 0;
        break;
    case ConstraintKind::at_least:
        base = k > d ? k - d : 0;
        break;
    }
    return std::max(base, floor);
}

namespace {

// Restriction of c to a subscope missing `missing` of its steps. An
// extension may put fresh users on the missing steps, so at_least needs
// k - missing users inside the subscope, but never more than |U| overall.
std::optional<ClassicalConstraint> restrict_to(const WeightedConstraint& c, ElementMask sub, std::size_t missing,
                                               std::size_t user_count)
{
    ClassicalConstraint out;
    out.scope = sub;
    out.weight = c.weight;
    out.origin = c.id;
    const std::size_t size = count(sub);

    std::size_t need = c.k;
    ConstraintKind kind = c.kind;
    if (missing == 0 && (kind == ConstraintKind::sod || kind == ConstraintKind::bod)) {
        out.kind = kind;
        return out;
    }
    if (kind == ConstraintKind::sod) {
        kind = ConstraintKind::at_least;
        need = 2;
    } else if (kind == ConstraintKind::bod) {
        kind = ConstraintKind::at_most;
        need = 1;
    }

    if (kind == ConstraintKind::at_most) {
        if (need >= size) {
            return std::nullopt;
        }
        out.kind = ConstraintKind::at_most;
        out.k = need;
        return out;
    }
    out.kind = ConstraintKind::at_least;
    out.k = need > missing ? need - missing : 0;
    out.floor = need > user_count ? need - user_count : 0;
    if (out.k <= 1 && out.floor == 0) {
        return std::nullopt;
    }
    return out;
}

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

using Matrix = std::vector<std::vector<std::int64_t>>;

// Min-cost assignment of every row to a distinct column (rows <= cols).
// Returns the cost and the column of each row.
std::pair<std::int64_t, std::vector<std::size_t>> hungarian(const Matrix& a, std::size_t cols)
{
    const std::size_t n = a.size();
    const std::size_t m = cols;
    std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::int64_t delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) {
                    continue;
                }
                const std::int64_t cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col(n, 0);
    std::int64_t cost = 0;
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) {
            col[p[j] - 1] = j - 1;
            cost += a[p[j] - 1][j - 1];
        }
    }
    return {cost, std::move(col)};
}

std::int64_t optimum(const Matrix& a, std::size_t cols)
{
    return a.empty() ? 0 : hungarian(a, cols).first;
}

Matrix block_costs(const std::vector<ElementMask>& blocks, const Schema& schema)
{
    Matrix cost(blocks.size(), std::vector<std::int64_t>(schema.users.size(), 0));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for_each_bit(blocks[b], [&](ElementIndex s) {
            for (UserIndex u = 0; u < schema.users.size(); ++u) {
                if (!schema.is_authorized(s, u)) {
                    cost[b][u] += schema.penalty(s);
                }
            }
        });
    }
    return cost;
}

// Lexicographically smallest optimal assignment: fix rows in order, taking
// the smallest column that still admits an optimal completion.
std::vector<UserIndex> lexicographic_assignment(const Matrix& cost, std::size_t users, std::int64_t target)
{
    const std::size_t n = cost.size();
    std::vector<UserIndex> chosen;
    std::vector<char> taken(users, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (UserIndex u = 0; u < users && !placed; ++u) {
            if (taken[u]) {
                continue;
            }
            Matrix rest;
            for (std::size_t r = i + 1; r < n; ++r) {
                std::vector<std::int64_t> row;
                for (UserIndex c = 0; c < users; ++c) {
                    if (!taken[c] && c != u) {
                        row.push_back(cost[r][c]);
                    }
                }
                rest.push_back(std::move(row));
            }
            const std::size_t free_cols = users - static_cast<std::size_t>(std::count(taken.begin(), taken.end(), 1)) - 1;
            if (cost[i][u] + optimum(rest, free_cols) == target) {
                chosen.push_back(u);
                taken[u] = 1;
                target -= cost[i][u];
                placed = true;
            }
        }
        if (!placed) {
            throw std::logic_error("assignment target is not attainable");
        }
    }
    return chosen;
}

} // namespace

std::vector<ClassicalConstraint> decompose_constraint(const WeightedConstraint& c, const Arrangement& arrangement,
                                                      std::size_t user_count)
{
    // Cut after slot j whenever release_order[j] is one of c's release points.
    std::vector<ElementMask> regions{0};
    for (std::size_t j = 0; j < arrangement.slots.size(); ++j) {
        regions.back() |= arrangement.slots[j];
        if (j < arrangement.release_order.size() && contains(c.release, arrangement.release_order[j])) {
            regions.push_back(0);
        }
    }
    const std::size_t total = count(c.scope);
    std::vector<ClassicalConstraint> out;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const ElementMask sub = c.scope & regions[i];
        if (sub == 0) {
            continue;
        }
        if (auto restricted = restrict_to(c, sub, total - count(sub), user_count)) {
            restricted->subscope = i;
            out.push_back(std::move(*restricted));
        }
    }
    return out;
}

std::int64_t pattern_constraint_weight(const Partition& partition, std::span<const ClassicalConstraint> constraints)
{
    std::int64_t total = 0;
    for (const auto& c : constraints) {
        std::size_t distinct = 0;
        for (ElementMask block : partition.blocks) {
            distinct += (block & c.scope) != 0 ? 1 : 0;
        }
        total += c.weight * static_cast<std::int64_t>(c.magnitude(distinct));
    }
    return total;
}

BlockAssignment min_auth_weight(const Partition& partition, const Schema& schema)
{
    if (partition.blocks.size() > schema.users.size()) {
        throw TooManyBlocks(std::to_string(partition.blocks.size()) + " blocks but only " +
                            std::to_string(schema.users.size()) + " users");
    }
    BlockAssignment out;
    if (partition.blocks.empty()) {
        return out;
    }
    const Matrix cost = block_costs(partition.blocks, schema);
    out.cost = hungarian(cost, schema.users.size()).first;
    out.users = lexicographic_assignment(cost, schema.users.size(), out.cost);
    return out;
}

CostedPlan solve_vwsp(ElementMask steps, std::span<const ClassicalConstraint> constraints, const Schema& schema,
                      SolveStats* stats)
{
    CostedPlan best;
    const auto order = indices_of(steps);
    const std::size_t n = order.size();
    if (n == 0) {
        return best;
    }
    const std::size_t users = schema.users.size();
    const std::size_t cap = std::min(n, users);

    // Per step, per user cost of an unauthorized assignment.
    Matrix step_cost(n, std::vector<std::int64_t>(users, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (UserIndex u = 0; u < users; ++u) {
            step_cost[i][u] = schema.is_authorized(order[i], u) ? 0 : schema.penalty(order[i]);
        }
    }
    // Constraint scopes as local step positions.
    std::vector<std::vector<std::size_t>> scope_pos;
    for (const auto& c : constraints) {
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < n; ++i) {
            if (contains(c.scope, order[i])) {
                pos.push_back(i);
            }
        }
        scope_pos.push_back(std::move(pos));
    }

    std::vector<std::size_t> label(n, 0);
    std::vector<std::size_t> best_label;
    std::int64_t best_total = kInf;
    std::int64_t best_cw = 0;
    std::uint64_t visited = 0;
    Matrix block(cap, std::vector<std::int64_t>(users, 0));

    auto score = [&](std::size_t blocks) {
        ++visited;
        std::int64_t cw = 0;
        for (std::size_t c = 0; c < constraints.size(); ++c) {
            std::uint64_t seen = 0;
            for (std::size_t pos : scope_pos[c]) {
                seen |= std::uint64_t{1} << label[pos];
            }
            cw += constraints[c].weight * static_cast<std::int64_t>(constraints[c].magnitude(count(seen)));
        }
        if (cw >= best_total) {
            return;
        }
        Matrix a(blocks, std::vector<std::int64_t>(users, 0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& row = a[label[i]];
            for (UserIndex u = 0; u < users; ++u) {
                row[u] += step_cost[i][u];
            }
        }
        const std::int64_t aw = hungarian(a, users).first;
        if (cw + aw < best_total) {
            best_total = cw + aw;
            best_cw = cw;
            best_label = label;
        }
    };

    // Restricted-growth strings: label[i] <= 1 + max(label[0..i-1]).
    auto extend = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            score(used);
            return;
        }
        const std::size_t top = std::min(used + 1, cap);
        for (std::size_t l = 0; l < top; ++l) {
            label[i] = l;
            self(self, i + 1, std::max(used, l + 1));
        }
    };
    extend(extend, 0, 0);

    if (stats != nullptr) {
        stats->partitions_visited += visited;
    }

    Partition partition;
    for (std::size_t i = 0; i < n; ++i) {
        if (best_label[i] == partition.blocks.size()) {
            partition.blocks.push_back(0);
        }
        partition.blocks[best_label[i]] |= bit(order[i]);
    }
    const BlockAssignment assignment = min_auth_weight(partition, schema);
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        for_each_bit(partition.blocks[b], [&](ElementIndex s) { best.plan.assignment[s] = assignment.users[b]; });
    }
    best.constraint_weight = best_cw;
    best.authorization_weight = assignment.cost;
    best.total = best_total;
    return best;
}

bool SolveCache::lookup(const std::string& key, CostedPlan& out) const
{
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return false;
    }
    out = it->second;
    return true;
}

void SolveCache::store(const std::string& key, const CostedPlan& value)
{
    std::lock_guard lock(mutex_);
    entries_.insert_or_assign(key, value);
}

std::size_t SolveCache::size() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

namespace {

std::string cache_key(ElementMask component, std::vector<const ClassicalConstraint*> cs)
{
    std::vector<std::string> parts;
    for (const auto* c : cs) {
        std::ostringstream os;
        os << static_cast<int>(c->kind) << ':' << c->scope << ':' << c->k << ':' << c->floor << ':' << c->weight;
        parts.push_back(os.str());
    }
    std::sort(parts.begin(), parts.end());
    std::string key = std::to_string(component);
    for (const auto& p : parts) {
        key += '|' + p;
    }
    return key;
}

} // namespace

CostedPlan min_cost_arrangement(const Arrangement& arrangement, const Schema& schema, SolveCache* cache,
                                SolveStats* stats)
{
    std::vector<ClassicalConstraint> all;
    for (const auto& c : schema.constraints) {
        auto parts = decompose_constraint(c, arrangement, schema.users.size());
        std::move(parts.begin(), parts.end(), std::back_inserter(all));
    }

    // Union-find over element indices joined by shared constraint scopes.
    std::vector<ElementIndex> parent(kMaxElements);
    std::iota(parent.begin(), parent.end(), ElementIndex{0});
    auto find = [&](ElementIndex x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& c : all) {
        const auto members = indices_of(c.scope);
        for (std::size_t i = 1; i < members.size(); ++i) {
            parent[find(members[i])] = find(members[0]);
        }
    }
    std::vector<ElementMask> components;
    std::vector<ElementIndex> roots;
    for_each_bit(arrangement.steps(), [&](ElementIndex s) {
        const ElementIndex r = find(s);
        const auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            components.push_back(bit(s));
        } else {
            components[static_cast<std::size_t>(it - roots.begin())] |= bit(s);
        }
    });

    CostedPlan result;
    for (ElementMask component : components) {
        std::vector<const ClassicalConstraint*> mine;
        std::vector<ClassicalConstraint> local;
        for (const auto& c : all) {
            if ((c.scope & component) != 0) {
                mine.push_back(&c);
                local.push_back(c);
            }
        }
        CostedPlan part;
        const std::string key = cache != nullptr ? cache_key(component, mine) : std::string{};
        if (cache == nullptr || !cache->lookup(key, part)) {
            part = solve_vwsp(component, local, schema, stats);
            if (cache != nullptr) {
                cache->store(key, part);
            }
        }
        result.plan.assignment.insert(part.plan.assignment.begin(), part.plan.assignment.end());
        result.constraint_weight += part.constraint_weight;
        result.authorization_weight += part.authorization_weight;
        result.total += part.total;
    }
    return result;
}

} // namespace wfsat
