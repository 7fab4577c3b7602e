#include "obsv/error.hpp"
#include "obsv/model.hpp"

#include "random_expr.hpp"

#include <gtest/gtest.h>

using namespace obsv;

namespace {

std::string fixture(const std::string& name) { return std::string(OBSV_MODELS_DIR) + "/" + name; }

// a and b agree as rational functions.
bool same(const Expr& a, const Expr& b) { return is_zero(a - b).verdict == ZeroVerdict::Zero; }

Expr rhs_of(const OdeSystem& sys, const std::string& state) { return sys.rhs[*sys.state_index(state)]; }

Expr E(const OdeSystem& sys, const std::string& text)
{
    SymbolTable t = sys.symbols();
    for (const auto& q : sys.conserved)
        if (!t.find(q.level))
            t.add({q.level, SymbolKind::Parameter});
    return parse_expr(text, t);
}

ErrorKind parse_error(const std::string& text)
{
    try {
        parse_model(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ErrorKind::InvalidArgument;
}

const char* kSirHeader = "model: sir\nparams: beta, lambda\nstates: S, I, R\n";

}  // namespace

TEST(ParseModel, Sir)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    EXPECT_EQ(sys.name, "sir");
    ASSERT_EQ(sys.size(), 3u);
    EXPECT_EQ(sys.states[0].name, "S");
    EXPECT_EQ(sys.params.size(), 2u);
    ASSERT_EQ(sys.conserved.size(), 1u);
    EXPECT_EQ(sys.conserved[0].level, "N");
    EXPECT_EQ(sys.conserved[0].verified, Verification::Unchecked);
    EXPECT_EQ(to_string(sys.rhs[0]), "-beta*S*I");
    ASSERT_EQ(sys.observations.size(), 2u);
    EXPECT_EQ(sys.observations[0].label, "recovered");
}

TEST(ParseModel, MichaelisMenten)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    EXPECT_EQ(sys.size(), 4u);
    EXPECT_EQ(sys.conserved.size(), 2u);
    EXPECT_TRUE(same(rhs_of(sys, "e"), E(sys, "km1*c + k2*c - k1*e*s")));
}

TEST(ParseModel, Errors)
{
    std::string base = kSirHeader;
    EXPECT_EQ(parse_error(base + "dS/dt = -beta*S*I\ndR/dt = lambda*I\n"), ErrorKind::MissingEquation);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndS/dt = S\ndI/dt = I\ndR/dt = R\n"), ErrorKind::DuplicateEquation);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = Q\n"), ErrorKind::UnknownSymbol);
    EXPECT_EQ(parse_error(base + "dQ/dt = S\n"), ErrorKind::UnknownSymbol);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = R\nwatch: S\n"), ErrorKind::SyntaxError);
    EXPECT_EQ(parse_error("states: S\nmodel: x\nparams:\ndS/dt = S\n"), ErrorKind::SyntaxError);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = R\nobserve a: S\nconserved N: S\n"),
              ErrorKind::SyntaxError);
    EXPECT_EQ(parse_error(base + "dS/dt = S^1.5\ndI/dt = I\ndR/dt = R\n"), ErrorKind::NonIntegerExponent);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = R\nconserved beta: S\n"),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = R\nconserved K: beta\n"),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(parse_error(base + "dS/dt = S\ndI/dt = I\ndR/dt = R\nobserve a: beta\n"), ErrorKind::UnknownSymbol);
}

TEST(ParseModel, MissingEquationNamesState)
{
    try {
        parse_model(std::string(kSirHeader) + "dS/dt = -beta*S*I\ndR/dt = lambda*I\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("'I'"), std::string::npos);
    }
}

TEST(ParseModel, CommentsAndBlankLines)
{
    OdeSystem sys = parse_model("# header\n\nmodel: m # name\nparams:\nstates: x\n  dx/dt = -x  # decay\n");
    EXPECT_EQ(sys.name, "m");
    EXPECT_TRUE(sys.params.empty());
    EXPECT_EQ(to_string(sys.rhs[0]), "-x");
}

TEST(VerifyConserved, FixtureQuantitiesAreExact)
{
    for (const char* name : {"sir.model", "mm.model", "toy.model", "lv.model"}) {
        OdeSystem sys = load_model(fixture(name));
        for (const auto& q : sys.conserved)
            EXPECT_EQ(verify_conserved(sys, q).verdict, ConservedVerdict::Exact) << name << " " << q.level;
    }
}

TEST(VerifyConserved, RefutedWithWitness)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    ConservedQuantity h{"K", E(sys, "S + I")};
    ConservedCheck c = verify_conserved(sys, h);
    EXPECT_EQ(c.verdict, ConservedVerdict::Refuted);
    ASSERT_TRUE(c.witness);
    // dH/dt = -lambda*I, nonzero at the witness.
    EXPECT_TRUE(same(c.derivative, E(sys, "-lambda*I")));
    EXPECT_NE(eval_exact(E(sys, "lambda*I"), *c.witness), 0);
}

TEST(VerifyConserved, VerifyAllUpdatesFlags)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    std::vector<ConservedCheck> checks;
    OdeSystem v = verify_all(sys, &checks);
    EXPECT_EQ(checks.size(), 2u);
    for (const auto& q : v.conserved)
        EXPECT_EQ(q.verified, Verification::Exact);
    EXPECT_EQ(sys.conserved[0].verified, Verification::Unchecked);
}

TEST(LieDerivative, Sir)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    Expr l1 = lie_derivative(sys, E(sys, "R"));
    EXPECT_TRUE(same(l1, E(sys, "lambda*I")));
    EXPECT_TRUE(same(lie_derivative(sys, l1), E(sys, "lambda*(beta*S*I - lambda*I)")));
    EXPECT_TRUE(lie_derivative(sys, Expr::constant(7)).is_const(0));
}

TEST(LieDerivative, IsADerivation)
{
    auto t = testgen::xyz_table();
    testgen::ExprGen gen(t, 11);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        OdeSystem sys;
        sys.params = {{"z", SymbolKind::Parameter}};
        sys.states = {{"x", SymbolKind::State}, {"y", SymbolKind::State}};
        sys.rhs = {gen.gen(2), gen.gen(2)};
        Expr a = gen.gen(2), b = gen.gen(2);
        Expr lhs = lie_derivative(sys, a * b);
        Expr rhs = a * lie_derivative(sys, b) + b * lie_derivative(sys, a);
        ExactPoint p = gen.point();
        try {
            EXPECT_EQ(eval_exact(lhs, p), eval_exact(rhs, p)) << to_string(a) << " | " << to_string(b);
            ++checked;
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::DivisionByZero);
        }
    }
    EXPECT_GT(checked, 150);
}

TEST(Reduce, SirSolveForI)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    OdeSystem red = reduce_by_conserved(sys, sys.conserved[0], "I");
    EXPECT_EQ(red.size(), 3u);
    EXPECT_TRUE(red.is_eliminated("I"));
    EXPECT_EQ(red.params.back().name, "N");
    EXPECT_TRUE(same(rhs_of(red, "S"), E(red, "-beta*S*(N - S - R)")));
    EXPECT_TRUE(same(rhs_of(red, "R"), E(red, "lambda*(N - S - R)")));
    EXPECT_TRUE(same(rhs_of(red, "I"), E(red, "beta*S*(N - S - R) - lambda*(N - S - R)")));
    EXPECT_EQ(red.equations()[1], "dI/dt = -dS/dt - dR/dt");
    EXPECT_EQ(to_string(red.eliminations[0].value), "N - S - R");
    // The declared dynamics are untouched.
    EXPECT_EQ(red.original_rhs, sys.rhs);
}

TEST(Reduce, MichaelisMentenSubstrate)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    OdeSystem red = reduce_by_conserved(sys, *sys.find_conserved("S0"), "c");
    EXPECT_TRUE(same(rhs_of(red, "e"), E(red, "(km1 + k2)*(S0 - s - p) - k1*e*s")));
    EXPECT_TRUE(same(rhs_of(red, "s"), E(red, "km1*(S0 - s - p) - k1*e*s")));
    EXPECT_TRUE(same(rhs_of(red, "p"), E(red, "k2*(S0 - s - p)")));
    EXPECT_EQ(red.equations()[2], "dc/dt = -ds/dt - dp/dt");
}

TEST(Reduce, MichaelisMentenEnzyme)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    OdeSystem red = reduce_by_conserved(sys, *sys.find_conserved("E0"), "e");
    EXPECT_TRUE(same(rhs_of(red, "s"), E(red, "km1*c - k1*(E0 - c)*s")));
    EXPECT_TRUE(same(rhs_of(red, "c"), E(red, "k1*(E0 - c)*s - (km1 + k2)*c")));
    EXPECT_TRUE(same(rhs_of(red, "p"), E(red, "k2*c")));
    EXPECT_EQ(red.equations()[0], "de/dt = -dc/dt");
}

TEST(Reduce, MichaelisMentenBothQuantities)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    for (bool enzyme_first : {false, true}) {
        OdeSystem red = enzyme_first
                            ? reduce_by_conserved(reduce_by_conserved(sys, *sys.find_conserved("E0"), "e"),
                                                  *sys.find_conserved("S0"), "c")
                            : reduce_by_conserved(reduce_by_conserved(sys, *sys.find_conserved("S0"), "c"),
                                                  *sys.find_conserved("E0"), "e");
        EXPECT_TRUE(same(rhs_of(red, "s"), E(red, "km1*(S0 - s - p) - k1*(E0 - S0 + s + p)*s")));
        EXPECT_TRUE(same(rhs_of(red, "p"), E(red, "k2*(S0 - s - p)")));
        EXPECT_EQ(red.equations()[0], "de/dt = ds/dt + dp/dt");
        EXPECT_EQ(red.equations()[2], "dc/dt = -ds/dt - dp/dt");
        for (const auto& e : red.eliminations)
            EXPECT_FALSE(depends_on(e.value, "e") || depends_on(e.value, "c"));
    }
}

TEST(Reduce, ScaledCoefficient)
{
    OdeSystem sys = parse_model("model: m\nparams: k\nstates: x, y\ndx/dt = -k*x\ndy/dt = 2*k*x\n"
                                "conserved L: 2*x + y\n");
    OdeSystem red = reduce_by_conserved(sys, sys.conserved[0], "x");
    EXPECT_TRUE(same(red.eliminations[0].value, E(red, "(L - y)/2")));
    EXPECT_TRUE(same(rhs_of(red, "y"), E(red, "k*(L - y)")));
    EXPECT_EQ(red.equations()[0], "dx/dt = -1/2*dy/dt");
}

TEST(Reduce, Errors)
{
    OdeSystem lv = load_model(fixture("lv.model"));
    try {
        reduce_by_conserved(lv, lv.conserved[0], "r");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAffineIn);
    }
    OdeSystem mm = load_model(fixture("mm.model"));
    try {
        reduce_by_conserved(mm, *mm.find_conserved("E0"), "p");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroCoefficient);
    }
    OdeSystem sys = parse_model("model: m\nparams:\nstates: x, y\ndx/dt = y\ndy/dt = -x\nconserved K: x*y + y\n");
    try {
        reduce_by_conserved(sys, sys.conserved[0], "y");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAffineIn);
    }
}
