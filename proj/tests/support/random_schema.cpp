#include "random_schema.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfsat::testing {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

NodePtr build(std::mt19937_64& rng, std::vector<NodePtr>& leaves, std::size_t lo, std::size_t hi,
              std::size_t& choices_left)
{
    if (hi - lo == 1) {
        return leaves[lo];
    }
    const std::size_t mid = uniform(rng, lo + 1, hi - 1);
    NodePtr l = build(rng, leaves, lo, mid, choices_left);
    NodePtr r = build(rng, leaves, mid, hi, choices_left);
    const std::size_t pick = uniform(rng, 0, choices_left > 0 ? 5 : 3);
    if (pick >= 4) {
        --choices_left;
        return CompositionNode::choice(std::move(l), std::move(r));
    }
    return pick < 2 ? CompositionNode::seq(std::move(l), std::move(r)) : CompositionNode::par(std::move(l), std::move(r));
}

} // namespace

NodePtr random_tree(std::mt19937_64& rng, std::size_t steps, std::size_t releases, std::size_t max_choices)
{
    std::vector<NodePtr> leaves;
    for (std::size_t i = 1; i <= steps; ++i) {
        leaves.push_back(CompositionNode::step("s" + std::to_string(i)));
    }
    for (std::size_t i = 1; i <= releases; ++i) {
        leaves.push_back(CompositionNode::release("r" + std::to_string(i)));
    }
    std::shuffle(leaves.begin(), leaves.end(), rng);
    std::size_t choices_left = max_choices;
    return build(rng, leaves, 0, leaves.size(), choices_left);
}

Schema random_schema(std::mt19937_64& rng, const GeneratorConfig& config)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::size_t n_steps = uniform(rng, config.min_steps, config.max_steps);
        const std::size_t n_releases = uniform(rng, 0, config.max_releases);
        const std::size_t n_users = uniform(rng, 1, config.max_users);
        std::vector<std::string> users;
        for (std::size_t u = 1; u <= n_users; ++u) {
            users.push_back("u" + std::to_string(u));
        }
        Schema schema = Schema::create(random_tree(rng, n_steps, n_releases, config.max_choices), users);

        const auto steps = indices_of(schema.steps());
        const auto releases = indices_of(schema.releases());
        for (ElementIndex s : steps) {
            const UserIndex must = uniform(rng, 0, n_users - 1);
            schema.authorized[s][must] = true;
            for (UserIndex u = 0; u < n_users; ++u) {
                if (uniform(rng, 0, 2) == 0) {
                    schema.authorized[s][u] = true;
                }
            }
        }
        schema.default_unauth_penalty = static_cast<std::int64_t>(uniform(rng, 1, config.max_penalty));
        for (ElementIndex s : steps) {
            if (uniform(rng, 0, 3) == 0) {
                schema.step_unauth_penalty[s] = static_cast<std::int64_t>(uniform(rng, 1, config.max_penalty));
            }
        }

        const auto exclusive = exclusive_pairs(*schema.workflow, schema.elements);
        auto compatible = [&](ElementMask scope) {
            for (const auto& [a, b] : exclusive) {
                if (contains(scope, a) && contains(scope, b)) {
                    return false;
                }
            }
            return true;
        };

        const std::size_t n_constraints = uniform(rng, 0, config.max_constraints);
        for (std::size_t i = 0; i < n_constraints && steps.size() >= 2; ++i) {
            WeightedConstraint c;
            c.id = "c" + std::to_string(i + 1);
            c.kind = static_cast<ConstraintKind>(uniform(rng, 0, 3));
            const std::size_t arity = c.kind == ConstraintKind::sod || c.kind == ConstraintKind::bod
                                          ? 2
                                          : uniform(rng, 2, std::min<std::size_t>(4, steps.size()));
            auto pool = steps;
            std::shuffle(pool.begin(), pool.end(), rng);
            for (std::size_t j = 0; j < arity; ++j) {
                c.scope |= bit(pool[j]);
            }
            if (!compatible(c.scope)) {
                continue;
            }
            if (c.kind == ConstraintKind::at_most || c.kind == ConstraintKind::at_least) {
                c.k = uniform(rng, 1, arity);
            }
            for (ElementIndex r : releases) {
                if (uniform(rng, 0, 1) == 0) {
                    c.release |= bit(r);
                }
            }
            c.weight = static_cast<std::int64_t>(uniform(rng, 1, static_cast<std::size_t>(config.max_weight)));
            schema.constraints.push_back(std::move(c));
        }

        if (validate_schema(schema).ok()) {
            return schema;
        }
    }
    throw std::runtime_error("random_schema: no valid schema generated");
}

std::string data_file(const std::string& name)
{
    return std::string(WFSAT_DATA_DIR) + "/" + name;
}

} // namespace wfsat::testing
