#include "njt/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace njt {

namespace {

std::size_t table_size(const std::vector<int>& cards) {
    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    return n;
}

// Strides for row-major layout with the last variable fastest.
std::vector<std::size_t> strides_of(const std::vector<int>& cards) {
    std::vector<std::size_t> s(cards.size());
    std::size_t acc = 1;
    for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = acc;
        acc *= static_cast<std::size_t>(cards[static_cast<std::size_t>(i)]);
    }
    return s;
}

std::string var_list(const std::vector<VarId>& vars) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? " " : "") << vars[i];
    os << "}";
    return os.str();
}

}  // namespace

Potential::Potential() : values_{1.0} {}

Potential::Potential(std::vector<VarId> domain, std::vector<int> cards, std::vector<double> values)
    : domain_(std::move(domain)), cards_(std::move(cards)), values_(std::move(values)) {
    if (domain_.size() != cards_.size())
        throw DomainError("potential: domain/cardinality length mismatch");
    std::set<VarId> seen(domain_.begin(), domain_.end());
    if (seen.size() != domain_.size())
        throw DomainError("potential: duplicate variable in domain " + var_list(domain_));
    for (int c : cards_)
        if (c < 1) throw DomainError("potential: cardinality < 1");
    if (values_.size() != table_size(cards_))
        throw DomainError("potential: values length does not match domain " + var_list(domain_));
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
            throw DomainError("potential: entry " + std::to_string(i) + " is negative or non-finite");

    if (std::is_sorted(domain_.begin(), domain_.end())) return;

    // Reorder to canonical (ascending id) layout.
    std::vector<std::size_t> perm(domain_.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t x, std::size_t y) { return domain_[x] < domain_[y]; });

    std::vector<VarId> new_domain(domain_.size());
    std::vector<int> new_cards(cards_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        new_domain[i] = domain_[perm[i]];
        new_cards[i] = cards_[perm[i]];
    }
    const auto old_strides = strides_of(cards_);
    const std::size_t n = values_.size();
    std::vector<double> new_values(n);
    std::vector<int> digits(new_domain.size(), 0);
    std::size_t old_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        new_values[i] = values_[old_index];
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            old_index += old_strides[perm[dd]];
            if (digits[dd] < new_cards[dd]) break;
            digits[dd] = 0;
            old_index -= old_strides[perm[dd]] * static_cast<std::size_t>(new_cards[dd]);
        }
    }
    domain_ = std::move(new_domain);
    cards_ = std::move(new_cards);
    values_ = std::move(new_values);
}

Potential Potential::ones(std::vector<VarId> domain, std::vector<int> cards) {
    std::vector<double> v(table_size(cards), 1.0);
    return Potential(std::move(domain), std::move(cards), std::move(v));
}

double Potential::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

int Potential::card_of(VarId v) const {
    for (std::size_t i = 0; i < domain_.size(); ++i)
        if (domain_[i] == v) return cards_[i];
    throw DomainError("potential: variable " + std::to_string(v) + " not in domain");
}

bool Potential::has(VarId v) const {
    return std::binary_search(domain_.begin(), domain_.end(), v);
}

void Potential::digits_of(std::size_t index, std::vector<int>& out) const {
    out.assign(domain_.size(), 0);
    for (int i = static_cast<int>(domain_.size()) - 1; i >= 0; --i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        out[ii] = static_cast<int>(index % static_cast<std::size_t>(cards_[ii]));
        index /= static_cast<std::size_t>(cards_[ii]);
    }
}

std::size_t Potential::index_of(const std::vector<int>& digits) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < domain_.size(); ++i)
        idx = idx * static_cast<std::size_t>(cards_[i]) + static_cast<std::size_t>(digits[i]);
    return idx;
}

Potential multiply(const Potential& a, const Potential& b) {
    // Union domain in canonical order.
    std::vector<VarId> domain;
    std::vector<int> cards;
    {
        std::size_t i = 0, j = 0;
        const auto& da = a.domain();
        const auto& db = b.domain();
        while (i < da.size() || j < db.size()) {
            if (j == db.size() || (i < da.size() && da[i] < db[j])) {
                domain.push_back(da[i]);
                cards.push_back(a.cards()[i]);
                ++i;
            } else if (i == da.size() || db[j] < da[i]) {
                domain.push_back(db[j]);
                cards.push_back(b.cards()[j]);
                ++j;
            } else {
                if (a.cards()[i] != b.cards()[j])
                    throw DomainError("multiply: cardinality mismatch for variable " +
                                      std::to_string(da[i]));
                domain.push_back(da[i]);
                cards.push_back(a.cards()[i]);
                ++i;
                ++j;
            }
        }
    }

    const std::size_t n = table_size(cards);
    // Per-output-variable strides into a and b (0 when absent).
    std::vector<std::size_t> sa(domain.size(), 0), sb(domain.size(), 0);
    {
        const auto stra = strides_of(a.cards());
        const auto strb = strides_of(b.cards());
        for (std::size_t d = 0; d < domain.size(); ++d) {
            for (std::size_t i = 0; i < a.domain().size(); ++i)
                if (a.domain()[i] == domain[d]) sa[d] = stra[i];
            for (std::size_t j = 0; j < b.domain().size(); ++j)
                if (b.domain()[j] == domain[d]) sb[d] = strb[j];
        }
    }

    std::vector<double> out(n);
    std::vector<int> digits(domain.size(), 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = a.values()[ia] * b.values()[ib];
        if (std::isinf(v))
            throw DomainError("multiply: overflow to infinity at entry " + std::to_string(i));
        out[i] = v;
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            ia += sa[dd];
            ib += sb[dd];
            if (digits[dd] < cards[dd]) break;
            digits[dd] = 0;
            ia -= sa[dd] * static_cast<std::size_t>(cards[dd]);
            ib -= sb[dd] * static_cast<std::size_t>(cards[dd]);
        }
    }
    return Potential(std::move(domain), std::move(cards), std::move(out));
}

Potential marginalize(const Potential& p, const std::vector<VarId>& keep) {
    std::vector<VarId> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    std::vector<int> kept_cards;
    for (VarId v : kept) {
        if (!p.has(v))
            throw DomainError("marginalize: variable " + std::to_string(v) + " not in domain " +
                              var_list(p.domain()));
        kept_cards.push_back(p.card_of(v));
    }

    const std::size_t out_n = table_size(kept_cards);
    std::vector<double> out(out_n, 0.0);
    // Stride of each source variable in the output (0 when summed out).
    const auto out_strides = strides_of(kept_cards);
    std::vector<std::size_t> so(p.domain().size(), 0);
    for (std::size_t i = 0; i < p.domain().size(); ++i)
        for (std::size_t k = 0; k < kept.size(); ++k)
            if (kept[k] == p.domain()[i]) so[i] = out_strides[k];

    std::vector<int> digits(p.domain().size(), 0);
    std::size_t io = 0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        out[io] += p.values()[i];
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            io += so[dd];
            if (digits[dd] < p.cards()[dd]) break;
            digits[dd] = 0;
            io -= so[dd] * static_cast<std::size_t>(p.cards()[dd]);
        }
    }
    return Potential(std::move(kept), std::move(kept_cards), std::move(out));
}

Potential divide(const Potential& a, const Potential& b) {
    for (VarId v : b.domain())
        if (!a.has(v))
            throw DomainError("divide: divisor variable " + std::to_string(v) +
                              " not in dividend domain " + var_list(a.domain()));

    const auto strb = strides_of(b.cards());
    std::vector<std::size_t> sb(a.domain().size(), 0);
    for (std::size_t i = 0; i < a.domain().size(); ++i)
        for (std::size_t j = 0; j < b.domain().size(); ++j)
            if (b.domain()[j] == a.domain()[i]) sb[i] = strb[j];

    std::vector<double> out(a.size());
    std::vector<int> digits(a.domain().size(), 0);
    std::size_t ib = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double num = a.values()[i];
        const double den = b.values()[ib];
        if (den == 0.0) {
            if (num != 0.0)
                throw InconsistencyError("divide: nonzero entry " + std::to_string(i) +
                                         " divided by zero");
            out[i] = 0.0;  // 0/0 convention
        } else {
            out[i] = num / den;
        }
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            ib += sb[dd];
            if (digits[dd] < a.cards()[dd]) break;
            digits[dd] = 0;
            ib -= sb[dd] * static_cast<std::size_t>(a.cards()[dd]);
        }
    }
    return Potential(a.domain(), a.cards(), std::move(out));
}

Potential slice(const Potential& p, const std::map<VarId, int>& assignment) {
    if (assignment.empty()) return p;

    std::vector<VarId> kept;
    std::vector<int> kept_cards;
    std::size_t base = 0;
    const auto strides = strides_of(p.cards());
    for (std::size_t i = 0; i < p.domain().size(); ++i) {
        const auto it = assignment.find(p.domain()[i]);
        if (it == assignment.end()) {
            kept.push_back(p.domain()[i]);
            kept_cards.push_back(p.cards()[i]);
        } else {
            if (it->second < 0 || it->second >= p.cards()[i])
                throw DomainError("slice: state " + std::to_string(it->second) +
                                  " out of range for variable " + std::to_string(p.domain()[i]));
            base += strides[i] * static_cast<std::size_t>(it->second);
        }
    }
    for (const auto& [v, s] : assignment) {
        (void)s;
        if (!p.has(v))
            throw DomainError("slice: variable " + std::to_string(v) + " not in domain " +
                              var_list(p.domain()));
    }

    std::vector<std::size_t> sk;  // source strides of kept variables
    for (std::size_t i = 0, k = 0; i < p.domain().size(); ++i)
        if (k < kept.size() && kept[k] == p.domain()[i]) {
            sk.push_back(strides[i]);
            ++k;
        }

    const std::size_t n = table_size(kept_cards);
    std::vector<double> out(n);
    std::vector<int> digits(kept.size(), 0);
    std::size_t is = base;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = p.values()[is];
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            is += sk[dd];
            if (digits[dd] < kept_cards[dd]) break;
            digits[dd] = 0;
            is -= sk[dd] * static_cast<std::size_t>(kept_cards[dd]);
        }
    }
    return Potential(std::move(kept), std::move(kept_cards), std::move(out));
}

std::vector<Violation> validate_network(const NetworkSpec& spec) {
    std::vector<Violation> out;
    const int n = static_cast<int>(spec.variables.size());

    std::set<std::string> names;
    for (int i = 0; i < n; ++i) {
        const auto& v = spec.variables[static_cast<std::size_t>(i)];
        if (v.id != i)
            out.push_back({v.name, "dense-ids", "variable id " + std::to_string(v.id) +
                                                    " at position " + std::to_string(i)});
        if (v.cardinality < 1)
            out.push_back({v.name, "cardinality", "cardinality must be >= 1"});
        if (!v.states.empty() && static_cast<int>(v.states.size()) != v.cardinality)
            out.push_back({v.name, "states", "state label count does not match cardinality"});
        if (!names.insert(v.name).second)
            out.push_back({v.name, "unique-names", "duplicate variable name"});
    }

    std::vector<int> cpt_count(static_cast<std::size_t>(n), 0);
    for (std::size_t c = 0; c < spec.cpts.size(); ++c) {
        const auto& cpt = spec.cpts[c];
        const std::string where = "cpt[" + std::to_string(c) + "]";
        if (cpt.child < 0 || cpt.child >= n) {
            out.push_back({where, "child-id", "child id out of range"});
            continue;
        }
        ++cpt_count[static_cast<std::size_t>(cpt.child)];
        bool parents_ok = true;
        std::set<VarId> pset;
        for (VarId p : cpt.parents) {
            if (p < 0 || p >= n) {
                out.push_back({where, "parent-id", "parent id out of range"});
                parents_ok = false;
            } else if (p == cpt.child) {
                out.push_back({where, "self-parent", "child listed among its parents"});
                parents_ok = false;
            } else if (!pset.insert(p).second) {
                out.push_back({where, "duplicate-parent", "parent listed twice"});
                parents_ok = false;
            }
        }
        if (!parents_ok) continue;

        std::size_t expected = static_cast<std::size_t>(spec.card(cpt.child));
        std::size_t nconf = 1;
        for (VarId p : cpt.parents) nconf *= static_cast<std::size_t>(spec.card(p));
        expected *= nconf;
        if (cpt.table.size() != expected) {
            out.push_back({where, "table-length",
                           "table has " + std::to_string(cpt.table.size()) + " entries, expected " +
                               std::to_string(expected)});
            continue;
        }
        const int cc = spec.card(cpt.child);
        for (std::size_t i = 0; i < cpt.table.size(); ++i)
            if (!(cpt.table[i] >= 0.0) || !std::isfinite(cpt.table[i])) {
                out.push_back({where, "nonnegative",
                               "entry " + std::to_string(i) + " negative or non-finite"});
                break;
            }
        for (std::size_t conf = 0; conf < nconf; ++conf) {
            double s = 0.0;
            for (int k = 0; k < cc; ++k)
                s += cpt.table[conf * static_cast<std::size_t>(cc) + static_cast<std::size_t>(k)];
            if (std::abs(s - 1.0) > 1e-9) {
                out.push_back({where, "normalization",
                               "column " + std::to_string(conf) + " sums to " + std::to_string(s)});
                break;
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (cpt_count[static_cast<std::size_t>(v)] == 0)
            out.push_back({spec.name(v), "missing-cpt", "variable has no CPT"});
        if (cpt_count[static_cast<std::size_t>(v)] > 1)
            out.push_back({spec.name(v), "duplicate-cpt", "variable has multiple CPTs"});
    }

    // Acyclicity over child <- parents edges (Kahn).
    {
        std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
        std::vector<int> indeg(static_cast<std::size_t>(n), 0);
        for (const auto& cpt : spec.cpts) {
            if (cpt.child < 0 || cpt.child >= n) continue;
            for (VarId p : cpt.parents) {
                if (p < 0 || p >= n || p == cpt.child) continue;
                children[static_cast<std::size_t>(p)].push_back(cpt.child);
                ++indeg[static_cast<std::size_t>(cpt.child)];
            }
        }
        std::vector<int> queue;
        for (int v = 0; v < n; ++v)
            if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
        std::size_t done = 0;
        while (done < queue.size()) {
            const int v = queue[done++];
            for (int c : children[static_cast<std::size_t>(v)])
                if (--indeg[static_cast<std::size_t>(c)] == 0) queue.push_back(c);
        }
        if (done != static_cast<std::size_t>(n))
            out.push_back({"network", "acyclicity", "parent structure contains a directed cycle"});
    }
    return out;
}

Potential cpt_potential(const NetworkSpec& spec, const Cpt& cpt) {
    std::vector<VarId> domain = cpt.parents;
    domain.push_back(cpt.child);  // child last = fastest, first parent slowest
    std::vector<int> cards;
    for (VarId v : domain) cards.push_back(spec.card(v));
    return Potential(std::move(domain), std::move(cards), cpt.table);
}

NetworkSpec apply_evidence(const NetworkSpec& spec, const Evidence& evidence) {
    for (const auto& [v, s] : evidence) {
        if (v < 0 || v >= static_cast<VarId>(spec.variables.size()))
            throw DomainError("evidence: unknown variable id " + std::to_string(v));
        if (s < 0 || s >= spec.card(v))
            throw DomainError("evidence: state " + std::to_string(s) +
                              " out of range for variable " + spec.name(v));
    }
    NetworkSpec out = spec;
    for (auto& cpt : out.cpts) {
        const auto it = evidence.find(cpt.child);
        if (it == evidence.end()) continue;
        const int cc = out.card(cpt.child);
        for (std::size_t i = 0; i < cpt.table.size(); ++i)
            if (static_cast<int>(i % static_cast<std::size_t>(cc)) != it->second)
                cpt.table[i] = 0.0;
    }
    return out;
}

}  // namespace njt
