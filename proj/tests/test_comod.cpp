#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <random>

#include "extforge/comod.hpp"

using namespace extforge;

namespace {

std::vector<int> degrees(const FiniteModule& m) {
    std::vector<int> d;
    for (auto& b : m.basis()) d.push_back(b.degree);
    return d;
}

bool valid(const FiniteModule& m) {
    std::string why;
    bool ok = m.is_valid(&why);
    if (!ok) MESSAGE(m.name << ": " << why);
    return ok;
}

// same actions once both bases are sorted by label
bool same_module(const FiniteModule& a, const FiniteModule& b) {
    if (a.dim() != b.dim() || a.profile() != b.profile()) return false;
    auto order = [](const FiniteModule& m) {
        std::vector<int> p(m.dim());
        std::iota(p.begin(), p.end(), 0);
        std::sort(p.begin(), p.end(), [&](int x, int y) { return m.basis()[x].label < m.basis()[y].label; });
        return p;
    };
    auto pa = order(a), pb = order(b);
    for (std::size_t k = 0; k < a.dim(); ++k)
        if (a.basis()[pa[k]].degree != b.basis()[pb[k]].degree) return false;
    int span = a.max_degree() - a.min_degree();
    for (int d = 1; d <= span; ++d)
        for (std::size_t i = 0; i < a.algebra().dim(d); ++i) {
            BitMatrix x = a.action(d, i), y = b.action(d, i);
            for (std::size_t r = 0; r < a.dim(); ++r)
                for (std::size_t c = 0; c < a.dim(); ++c)
                    if (x.get(pa[r], pa[c]) != y.get(pb[r], pb[c])) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("trivial, suspension and sums") {
    auto f = trivial();
    CHECK(f.dim() == 1);
    CHECK(valid(f));
    auto s = suspend(bo(1), 5);
    CHECK(degrees(s) == std::vector<int>{5, 9, 11, 12});
    CHECK(valid(s));
    auto sum = direct_sum(bo(1), suspend(f, 4));
    CHECK(sum.dim() == 5);
    CHECK(sum.dim_in_degree(4) == 2);
    CHECK(valid(sum));
}

TEST_CASE("Brown-Gitler comodules") {
    auto b1 = bo(1);
    CHECK(degrees(b1) == std::vector<int>{0, 4, 6, 7});
    CHECK(valid(b1));
    // Sq4 takes xi1^4 to 1, Sq(0,1) acts xi2^2 -> xi1^4 only through Sq2
    CHECK(b1.action({4}).get(0, 1));
    CHECK(b1.action({2}).get(1, 2));
    CHECK(b1.action({1}).get(2, 3));
    CHECK(b1.action({0, 1}).is_zero() == false);

    auto t1 = tmf_bg(1);
    CHECK(degrees(t1) == std::vector<int>{0, 8, 12, 14, 15});
    CHECK(valid(t1));

    CHECK(bo(0).dim() == 1);
    CHECK(bo(2).dim() == 11);
    for (int i = 0; i <= 8; ++i) {
        auto small = bo(i), big = bo(i + 1);
        CHECK(valid(big));
        CHECK(preserves_weight_filtration(big));
        std::set<std::string> labels;
        for (auto& b : big.basis()) labels.insert(b.label);
        for (auto& b : small.basis()) CHECK(labels.count(b.label));
    }
    CHECK(valid(tmf_bg(2)));
    CHECK(valid(tmf_bg(3)));
    CHECK_THROWS(bo(-1));
}

TEST_CASE("quotients of sub-Hopf algebras") {
    auto q = quotient_hopf_module(Profile::A(2), Profile::A(1));
    CHECK(degrees(q) == std::vector<int>{0, 4, 6, 7, 10, 11, 13, 17});
    CHECK(valid(q));
    CHECK(quotient_hopf_module(Profile::A(2), Profile::A(0)).dim() == 32);
    CHECK(valid(quotient_hopf_module(Profile::A(2), Profile::A(0))));
    CHECK(quotient_hopf_module(Profile::A(1), Profile::A(1)).dim() == 1);
    CHECK_THROWS(quotient_hopf_module(Profile::A(1), Profile::A(2)));
}

TEST_CASE("tensor products") {
    auto b = bo(1);
    auto bb = tensor(b, b);
    CHECK(bb.dim() == 16);
    CHECK(bb.max_degree() == 14);
    CHECK(valid(bb));
    CHECK(preserves_weight_filtration(bb));
    CHECK(same_module(tensor(trivial(), b), permute_basis(b, {0, 1, 2, 3}, "()⊗")));

    // associativity up to relabelling
    auto t = tmf_bg(1);
    auto l = tensor(tensor(b, t), b), r = tensor(b, tensor(t, b));
    CHECK(valid(l));
    CHECK(same_module(l, r));
    CHECK(l.dim() == 80);
}

TEST_CASE("dual modules") {
    auto b = bo(1);
    auto d = dualize(b);
    CHECK(degrees(d) == std::vector<int>{0, 1, 3, 7});
    CHECK(valid(d));
    auto dd = dualize(d);
    CHECK(valid(dd));
    CHECK(degrees(dd) == degrees(b));
    auto relabel = permute_basis(dd, {0, 1, 2, 3});
    for (std::size_t k = 0; k < 4; ++k) CHECK(relabel.basis()[k].label == "DD" + b.basis()[k].label);
    for (int a = 1; a <= 7; ++a)
        for (std::size_t i = 0; i < b.algebra().dim(a); ++i) CHECK(dd.action(a, i) == b.action(a, i));
    auto q = dualize(quotient_hopf_module(Profile::A(2), Profile::A(1)));
    CHECK(valid(q));
}

TEST_CASE("truncated Abar") {
    auto a = abar_truncation(24);
    CHECK(a.min_degree() == 8);
    CHECK(a.dim_in_degree(15) == 1);
    CHECK(valid(a));
    CHECK(a.valid_below == 24);
    CHECK_THROWS(abar_truncation(4));
}

TEST_CASE("splitting and exact sequences as series") {
    for (int n : {8, 15, 48}) {
        auto r = verify_splitting(n);
        for (auto& l : r.lines) MESSAGE(l);
        CHECK(r.ok);
    }
    for (int j : {1, 2, 3}) {
        auto r = verify_bo_sequence(j);
        for (auto& l : r.lines) MESSAGE(l);
        CHECK(r.ok);
    }
}

TEST_CASE("generator actions determine the module") {
    for (auto m : {bo(2), tmf_bg(1), tensor(bo(1), bo(1))}) {
        std::map<int, BitMatrix> gens;
        for (auto& g : m.algebra().generators())
            if (g[0] <= m.max_degree() - m.min_degree()) gens[g[0]] = m.action(g);
        auto back = from_generator_actions(m.profile(), m.basis(), gens);
        CHECK(same_module(m, back));
    }
}

TEST_CASE("json round trip") {
    for (auto m : {bo(2), abar_truncation(20), dualize(tmf_bg(1))}) {
        auto j = dump_module(m);
        auto back = load_module(nlohmann::json::parse(j.dump()));
        CHECK(back.name == m.name);
        CHECK(back.valid_below == m.valid_below);
        CHECK(same_module(m, back));
    }
    CHECK_THROWS(load_module(nlohmann::json::object()));
}

TEST_CASE("basis permutations keep the module") {
    auto m = tensor(bo(1), tmf_bg(1));
    std::vector<int> perm(m.dim());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(8);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto p = permute_basis(m, perm);
    CHECK(valid(p));
    CHECK(same_module(m, p));
}
