#include "njt/oracle.hpp"

#include <algorithm>

namespace njt {

namespace {

// Per-variable stride of each CPT's flat index (child fastest, first listed
// parent slowest), so the table can be addressed from a full configuration.
std::vector<std::vector<std::uint64_t>> cpt_strides(const NetworkSpec& spec) {
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(spec.cpts.size());
    for (const auto& cpt : spec.cpts) {
        std::vector<std::uint64_t> strides(spec.variables.size(), 0);
        std::uint64_t acc = 1;
        strides[static_cast<std::size_t>(cpt.child)] = acc;
        acc *= static_cast<std::uint64_t>(spec.card(cpt.child));
        for (auto it = cpt.parents.rbegin(); it != cpt.parents.rend(); ++it) {
            strides[static_cast<std::size_t>(*it)] = acc;
            acc *= static_cast<std::uint64_t>(spec.card(*it));
        }
        out.push_back(std::move(strides));
    }
    return out;
}

}  // namespace

Potential joint_table(const NetworkSpec& spec, const Evidence& evidence,
                      std::uint64_t max_entries) {
    const std::size_t n = spec.variables.size();
    std::uint64_t size = 1;
    for (const auto& v : spec.variables) {
        size *= static_cast<std::uint64_t>(v.cardinality);
        if (size > max_entries)
            throw ResourceError("joint_table: joint exceeds the " +
                                std::to_string(max_entries) + "-entry limit");
    }
    for (const auto& [v, s] : evidence) {
        if (v < 0 || static_cast<std::size_t>(v) >= n)
            throw DomainError("joint_table: unknown evidence variable " + std::to_string(v));
        if (s < 0 || s >= spec.card(v))
            throw DomainError("joint_table: evidence state out of range for " + spec.name(v));
    }

    const auto strides = cpt_strides(spec);
    std::vector<std::size_t> cpt_index(spec.cpts.size(), 0);
    std::vector<int> config(n, 0);
    std::vector<double> values(size);

    for (std::uint64_t i = 0; i < size; ++i) {
        bool blocked = false;
        for (const auto& [v, s] : evidence)
            if (config[static_cast<std::size_t>(v)] != s) {
                blocked = true;
                break;
            }
        double p = blocked ? 0.0 : 1.0;
        if (!blocked)
            for (std::size_t c = 0; c < spec.cpts.size(); ++c) p *= spec.cpts[c].table[cpt_index[c]];
        values[i] = p;

        // Advance the configuration (last variable fastest) and every CPT
        // index with it.
        for (int d = static_cast<int>(n) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++config[dd];
            for (std::size_t c = 0; c < spec.cpts.size(); ++c)
                cpt_index[c] += strides[c][dd];
            if (config[dd] < spec.card(static_cast<VarId>(d))) break;
            config[dd] = 0;
            for (std::size_t c = 0; c < spec.cpts.size(); ++c)
                cpt_index[c] -= strides[c][dd] * static_cast<std::uint64_t>(
                                                     spec.card(static_cast<VarId>(d)));
        }
    }

    std::vector<VarId> domain(n);
    for (std::size_t i = 0; i < n; ++i) domain[i] = static_cast<VarId>(i);
    return Potential(std::move(domain), spec.cards(), std::move(values));
}

Potential oracle_marginal(const NetworkSpec& spec, const std::vector<VarId>& vars,
                          const Evidence& evidence, std::uint64_t max_entries) {
    const Potential joint = joint_table(spec, evidence, max_entries);

    std::vector<VarId> keep(vars.begin(), vars.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<int> keep_cards;
    for (VarId v : keep) {
        if (v < 0 || static_cast<std::size_t>(v) >= spec.variables.size())
            throw DomainError("oracle_marginal: unknown variable " + std::to_string(v));
        keep_cards.push_back(spec.card(v));
    }

    std::uint64_t out_size = 1;
    for (int c : keep_cards) out_size *= static_cast<std::uint64_t>(c);
    std::vector<double> out(out_size, 0.0);

    // Direct accumulation over full configurations, not via marginalize().
    std::vector<std::uint64_t> out_stride(spec.variables.size(), 0);
    {
        std::uint64_t acc = 1;
        for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
            out_stride[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = acc;
            acc *= static_cast<std::uint64_t>(keep_cards[static_cast<std::size_t>(i)]);
        }
    }
    const std::size_t n = spec.variables.size();
    std::vector<int> config(n, 0);
    std::uint64_t io = 0;
    for (std::uint64_t i = 0; i < joint.size(); ++i) {
        out[io] += joint.values()[i];
        for (int d = static_cast<int>(n) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++config[dd];
            io += out_stride[dd];
            if (config[dd] < spec.card(static_cast<VarId>(d))) break;
            config[dd] = 0;
            io -= out_stride[dd] * static_cast<std::uint64_t>(spec.card(static_cast<VarId>(d)));
        }
    }

    double total = 0.0;
    for (double x : out) total += x;
    if (total <= 0.0)
        throw InconsistencyError("oracle_marginal: zero total mass (contradictory evidence)");
    for (double& x : out) x /= total;
    return Potential(std::move(keep), std::move(keep_cards), std::move(out));
}

}  // namespace njt
