#include <cavopt/problems.hpp>

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace cavopt;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    throw std::logic_error("expected cavopt::Error");
}

TEST(ParseDimacs, SingleClause) {
    const auto inst = std::get<Sat3Instance>(
        parse_instance(ProblemFormat::dimacs_cnf, "p cnf 3 1\n1 2 3 0\n"));
    EXPECT_EQ(inst.n, 3);
    EXPECT_EQ(inst.m, 1);
    EXPECT_EQ(inst.I[0], (std::array<int, 3>{1, 2, 3}));
    EXPECT_EQ(inst.B[0], (std::array<int, 3>{0, 0, 0}));
}

TEST(ParseDimacs, CommentsNegationsWhitespace) {
    const auto inst = std::get<Sat3Instance>(parse_instance(
        ProblemFormat::dimacs_cnf, "c header comment\np cnf 4 2\n c mid comment\n-1  2 4 0\n"
                                   "3 -4\n2 0\n"));
    EXPECT_EQ(inst.m, 2);
    EXPECT_EQ(inst.B[0], (std::array<int, 3>{1, 0, 0}));
    EXPECT_EQ(inst.I[1], (std::array<int, 3>{3, 4, 2}));
    EXPECT_EQ(inst.B[1], (std::array<int, 3>{0, 1, 0}));
}

TEST(ParseDimacs, RejectsRepeatedVariable) {
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 2 1\n1 -1 2 0\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 2 1\n1 1 2 0\n"); }),
              ErrorKind::Validation);
}

TEST(ParseDimacs, RejectsWrongArity) {
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 4 1\n1 2 0\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 4 1\n1 2 3 4 0\n"); }),
              ErrorKind::Validation);
}

TEST(ParseDimacs, RejectsClauseCountMismatchAndRange) {
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 3 2\n1 2 3 0\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::dimacs_cnf, "p cnf 3 1\n1 2 7 0\n"); }),
              ErrorKind::Validation);
}

TEST(ParseDimacs, SyntaxErrorsCarryLineNumbers) {
    try {
        parse_instance(ProblemFormat::dimacs_cnf, "p cnf 3 1\n1 2 x 0\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Syntax);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(ParseNpp, Basic) {
    const auto inst = std::get<NppInstance>(parse_instance(ProblemFormat::npp, " 3 1\n1 \n"));
    EXPECT_EQ(inst.integers, (std::vector<std::int64_t>{3, 1, 1}));
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::npp, "3 0 1"); }), ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::npp, "  "); }), ErrorKind::Validation);
}

TEST(ParseVertexCover, Triangle) {
    const auto inst = std::get<VertexCoverInstance>(
        parse_instance(ProblemFormat::vertex_cover, "3 3 2\n1 2\n2 3\n1 3\n"));
    EXPECT_EQ(inst.n, 3);
    EXPECT_EQ(inst.kappa, 2);
    EXPECT_EQ(inst.edges.size(), 3u);
}

TEST(ParseVertexCover, RejectsSelfLoopDuplicateBadKappa) {
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::vertex_cover, "3 1 1\n2 2\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::vertex_cover, "3 2 1\n1 2\n2 1\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::vertex_cover, "3 1 4\n1 2\n"); }),
              ErrorKind::Validation);
}

TEST(ParseQubo, Basic) {
    const auto inst = std::get<QuboInstance>(
        parse_instance(ProblemFormat::qubo, "3 2\n1 2 0.5\n2 3 -1.25\n"));
    EXPECT_EQ(inst.n, 3);
    EXPECT_DOUBLE_EQ(inst.couplings.at({1, 2}), 0.5);
    EXPECT_DOUBLE_EQ(inst.couplings.at({2, 3}), -1.25);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::qubo, "3 1\n2 1 0.5\n"); }),
              ErrorKind::Validation);
    EXPECT_EQ(kind_of([] { parse_instance(ProblemFormat::qubo, "3 2\n1 2 0.5\n1 2 1.0\n"); }),
              ErrorKind::Validation);
}

TEST(RoundTrip, SerializeThenParseIsIdentity) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        // NPP
        NppInstance npp;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) npp.integers.push_back(1 + static_cast<std::int64_t>(rng() % 50));
        auto npp2 = std::get<NppInstance>(
            parse_instance(ProblemFormat::npp, serialize_instance(npp)));
        EXPECT_EQ(npp.integers, npp2.integers);

        // 3-SAT with distinct variables per clause
        Sat3Instance sat;
        sat.n = 4 + static_cast<int>(rng() % 4);
        sat.m = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < sat.m; ++j) {
            std::array<int, 3> iv{};
            int used = 0;
            while (used < 3) {
                int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sat.n));
                bool dup = false;
                for (int t = 0; t < used; ++t)
                    if (iv[static_cast<std::size_t>(t)] == v) dup = true;
                if (!dup) iv[static_cast<std::size_t>(used++)] = v;
            }
            sat.I.push_back(iv);
            sat.B.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2),
                             static_cast<int>(rng() % 2)});
        }
        auto sat2 = std::get<Sat3Instance>(
            parse_instance(ProblemFormat::dimacs_cnf, serialize_instance(sat)));
        EXPECT_EQ(sat.I, sat2.I);
        EXPECT_EQ(sat.B, sat2.B);

        // Vertex cover
        VertexCoverInstance vc;
        vc.n = 3 + static_cast<int>(rng() % 4);
        for (int u = 1; u <= vc.n; ++u)
            for (int v = u + 1; v <= vc.n; ++v)
                if (rng() % 2) vc.edges.emplace_back(u, v);
        vc.kappa = static_cast<int>(rng() % static_cast<std::uint64_t>(vc.n + 1));
        auto vc2 = std::get<VertexCoverInstance>(
            parse_instance(ProblemFormat::vertex_cover, serialize_instance(vc)));
        EXPECT_EQ(vc.edges, vc2.edges);
        EXPECT_EQ(vc.kappa, vc2.kappa);

        // QUBO
        QuboInstance qb;
        qb.n = 2 + static_cast<int>(rng() % 4);
        std::uniform_real_distribution<double> jdist(-1, 1);
        for (int i = 1; i <= qb.n; ++i)
            for (int j = i + 1; j <= qb.n; ++j)
                if (rng() % 2) qb.couplings[{i, j}] = jdist(rng);
        auto qb2 = std::get<QuboInstance>(
            parse_instance(ProblemFormat::qubo, serialize_instance(qb)));
        EXPECT_EQ(qb.couplings, qb2.couplings);
    }
}

// Mutating valid files must never produce an instance that violates type
// invariants: parsing either throws or yields a valid instance.
TEST(Fuzz, MutatedFilesNeverYieldInvalidInstances) {
    const std::string base = "p cnf 4 2\n1 -2 3 0\n-1 2 4 0\n";
    std::mt19937_64 rng(7);
    const std::string charset = "pc nf0123456789- \n";
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text = base;
        const int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits; ++e)
            text[rng() % text.size()] = charset[rng() % charset.size()];
        try {
            const auto inst = std::get<Sat3Instance>(
                parse_instance(ProblemFormat::dimacs_cnf, text));
            ASSERT_GE(inst.n, 1);
            ASSERT_EQ(inst.I.size(), static_cast<std::size_t>(inst.m));
            for (int j = 0; j < inst.m; ++j) {
                const auto& iv = inst.I[static_cast<std::size_t>(j)];
                for (int t = 0; t < 3; ++t) {
                    ASSERT_GE(iv[static_cast<std::size_t>(t)], 1);
                    ASSERT_LE(iv[static_cast<std::size_t>(t)], inst.n);
                    for (int u = t + 1; u < 3; ++u)
                        ASSERT_NE(iv[static_cast<std::size_t>(t)], iv[static_cast<std::size_t>(u)]);
                }
            }
        } catch (const Error&) {
            // rejected; fine
        }
    }
}

}  // namespace
