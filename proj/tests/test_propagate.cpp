#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <vector>

#include "fixtures.hpp"
#include "njt/graph.hpp"
#include "njt/io.hpp"
#include "njt/oracle.hpp"
#include "njt/propagate.hpp"

using namespace njt;
using namespace njt::testing;

namespace {

void check_all_marginals(const NetworkSpec& spec, PropagationState& state,
                         const Evidence& evidence, double tol) {
    state.collect(0);
    state.distribute();
    for (const auto& v : spec.variables) {
        const Potential got = state.query_marginal(v.id);
        const Potential want = oracle_marginal(spec, {v.id}, evidence);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            REQUIRE(rel_diff(got.values()[i], want.values()[i]) < tol);
    }
}

}  // namespace

TEST_CASE("both architectures match the oracle on random networks") {
    for (std::uint32_t seed = 1; seed <= 12; ++seed) {
        const NetworkSpec spec = random_network(seed, 7 + static_cast<int>(seed % 3));
        const JunctionTree jt = make_network_tree(spec);
        for (const Architecture arch : {Architecture::hugin, Architecture::shafer_shenoy}) {
            PropagationState state(jt, spec.cards(), arch);
            check_all_marginals(spec, state, {}, 1e-12);
        }
    }
}

TEST_CASE("nested message computation yields identical marginals") {
    for (std::uint32_t seed = 1; seed <= 8; ++seed) {
        const NetworkSpec spec = random_network(seed, 8);
        const JunctionTree jt = make_network_tree(spec);
        for (const Architecture arch : {Architecture::hugin, Architecture::shafer_shenoy})
            for (const double gamma : {0.0, 0.3, 100.0}) {
                PropagationState state(jt, spec.cards(), arch, NestingPolicy{gamma});
                check_all_marginals(spec, state, {}, 1e-9);
            }
    }
}

TEST_CASE("posteriors under evidence match the oracle") {
    for (std::uint32_t seed = 1; seed <= 8; ++seed) {
        const NetworkSpec base = random_network(seed, 7);
        const Evidence ev{{0, 0}, {3, base.card(3) - 1}};
        const NetworkSpec spec = apply_evidence(base, ev);
        for (const Architecture arch : {Architecture::hugin, Architecture::shafer_shenoy}) {
            const JunctionTree jt = make_network_tree(spec);
            PropagationState state(jt, spec.cards(), arch);
            check_all_marginals(spec, state, ev, 1e-12);
        }
    }
}

TEST_CASE("results do not depend on the collect root") {
    const NetworkSpec spec = random_network(3, 9);
    const JunctionTree jt = make_network_tree(spec);
    std::vector<Potential> reference;
    for (int root = 0; root < static_cast<int>(jt.cliques.size()); ++root) {
        PropagationState state(jt, spec.cards(), Architecture::hugin);
        state.collect(root);
        state.distribute();
        if (root == 0) {
            for (const auto& v : spec.variables) reference.push_back(state.query_marginal(v.id));
            continue;
        }
        for (const auto& v : spec.variables) {
            const Potential got = state.query_marginal(v.id);
            const Potential& want = reference[static_cast<std::size_t>(v.id)];
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(rel_diff(got.values()[i], want.values()[i]) < 1e-12);
        }
    }
}

TEST_CASE("collect alone answers queries about the root clique only") {
    const NetworkSpec spec = chain4_network();
    const JunctionTree jt = make_network_tree(spec);
    PropagationState state(jt, spec.cards(), Architecture::hugin);

    CHECK_THROWS_AS(state.query_marginal(0), StructuralError);  // nothing ran yet

    state.collect(0);  // root clique {X1 X2}
    const Potential p0 = state.query_marginal(0);
    const Potential want = oracle_marginal(spec, {0}, {});
    for (std::size_t i = 0; i < p0.size(); ++i)
        CHECK(rel_diff(p0.values()[i], want.values()[i]) < 1e-12);
    CHECK_THROWS_AS(state.query_marginal(3), StructuralError);  // not in the root

    state.distribute();
    CHECK_NOTHROW(state.query_marginal(3));
}

TEST_CASE("distribute requires collect") {
    const NetworkSpec spec = chain4_network();
    const JunctionTree jt = make_network_tree(spec);
    PropagationState state(jt, spec.cards(), Architecture::hugin);
    CHECK_THROWS_AS(state.distribute(), StructuralError);
}

TEST_CASE("separator tables agree with the root-side clique marginal") {
    const NetworkSpec spec = random_network(6, 8);
    const JunctionTree jt = make_network_tree(spec);
    PropagationState state(jt, spec.cards(), Architecture::hugin);
    state.collect(0);
    state.distribute();

    for (const auto& e : jt.edges) {
        const Potential& phi_s = state.separator_table(e.a, e.b);
        // After the outward pass both clique marginals onto the separator
        // agree; the side updated last matches the stored table bit for bit.
        const Potential ma = marginalize(state.clique_table(e.a), e.separator);
        const Potential mb = marginalize(state.clique_table(e.b), e.separator);
        for (std::size_t i = 0; i < phi_s.size(); ++i) {
            CHECK(rel_diff(ma.values()[i], phi_s.values()[i]) < 1e-12);
            CHECK(rel_diff(mb.values()[i], phi_s.values()[i]) < 1e-12);
        }
        CHECK((ma.values() == phi_s.values() || mb.values() == phi_s.values()));
    }
}

TEST_CASE("shafer-shenoy never modifies the assigned potentials") {
    const NetworkSpec spec = random_network(9, 8);
    const JunctionTree jt = make_network_tree(spec);
    PropagationState state(jt, spec.cards(), Architecture::shafer_shenoy);
    state.collect(0);
    state.distribute();
    REQUIRE(state.tree().potentials.size() == jt.potentials.size());
    for (std::size_t p = 0; p < jt.potentials.size(); ++p)
        CHECK(state.tree().potentials[p].values() == jt.potentials[p].values());
}

TEST_CASE("hugin and shafer-shenoy send the same collect messages") {
    const NetworkSpec spec = random_network(12, 8);
    const JunctionTree jt = make_network_tree(spec);
    PropagationState hugin(jt, spec.cards(), Architecture::hugin);
    PropagationState ss(jt, spec.cards(), Architecture::shafer_shenoy);
    hugin.collect(0);
    ss.collect(0);
    // Collect messages are pure marginals of subtree products in both
    // architectures, so the traces pair up one to one.
    REQUIRE(hugin.trace().size() == ss.trace().size());
    for (std::size_t i = 0; i < hugin.trace().size(); ++i) {
        CHECK(hugin.trace()[i].from == ss.trace()[i].from);
        CHECK(hugin.trace()[i].to == ss.trace()[i].to);
        const Potential& m = ss.message(hugin.trace()[i].from, hugin.trace()[i].to);
        const Potential& s = hugin.separator_table(hugin.trace()[i].from, hugin.trace()[i].to);
        REQUIRE(m.size() == s.size());
        for (std::size_t k = 0; k < m.size(); ++k)
            CHECK(rel_diff(m.values()[k], s.values()[k]) < 1e-12);
    }
}

TEST_CASE("trace lines carry pass, endpoints, separator size and time") {
    const NetworkSpec spec = chain4_network();
    const JunctionTree jt = make_network_tree(spec);
    PropagationState state(jt, spec.cards(), Architecture::hugin);
    state.collect(0);
    state.distribute();

    const std::string text = format_trace(state.trace());
    const std::regex line(R"((collect|distribute) C\d+ -> C\d+ \d+ \d+)");
    std::istringstream in(text);
    std::string ln;
    int collects = 0, distributes = 0;
    while (std::getline(in, ln)) {
        CHECK(std::regex_match(ln, line));
        if (ln.rfind("collect", 0) == 0) ++collects;
        if (ln.rfind("distribute", 0) == 0) ++distributes;
    }
    CHECK(collects == 2);
    CHECK(distributes == 2);
}

TEST_CASE("bundled chain network matches the oracle") {
    const NetworkSpec spec =
        parse_network(read_file(std::string(NJT_DATA_DIR) + "/eq_chain.json"), "eq_chain.json");
    for (const Evidence& ev : {Evidence{}, Evidence{{3, 1}}}) {
        const NetworkSpec observed = ev.empty() ? spec : apply_evidence(spec, ev);
        const JunctionTree jt = make_network_tree(observed);
        for (const Architecture arch : {Architecture::hugin, Architecture::shafer_shenoy}) {
            PropagationState state(jt, observed.cards(), arch);
            check_all_marginals(observed, state, ev, 1e-9);
        }
    }
}

TEST_CASE("contradictory evidence is reported at query time") {
    // X2 deterministically copies X1; observing both to differ kills the mass.
    NetworkSpec spec = chain4_network();
    spec.cpts[1].table = {1.0, 0.0, 0.0, 1.0};
    const Evidence ev{{0, 0}, {1, 1}};
    const NetworkSpec observed = apply_evidence(spec, ev);
    const JunctionTree jt = make_network_tree(observed);
    PropagationState state(jt, observed.cards(), Architecture::shafer_shenoy);
    state.collect(0);
    state.distribute();
    CHECK_THROWS_AS(state.query_marginal(3), InconsistencyError);
}
