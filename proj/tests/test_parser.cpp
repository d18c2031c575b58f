#include <catch2/catch.hpp>

#include <random>

#include "dho/parser.hpp"
#include "dho/weyl.hpp"

using namespace dho;

namespace {

SymbolicParams unit_params() {
  SymbolicParams sp;
  sp.lambda = Rational(1);
  return sp;
}

}  // namespace

TEST_CASE("parse_commutator_expression") {
  // y*p - p*y evaluates to the constant i hbar
  SymbolicParams sp = unit_params();
  OperatorPoly result = parse_operator("y*p - p*y", sp);
  CHECK(result == OperatorPoly::constant(RationalComplex{Rational(0), Rational(1)}));

  sp.hbar = Rational(3, 2);
  CHECK(parse_operator("y*p - p*y", sp) ==
        OperatorPoly::constant(RationalComplex{Rational(0), Rational(3, 2)}));
}

TEST_CASE("division_is_not_an_operator") {
  SymbolicParams sp = unit_params();
  try {
    parse_operator("p^2/y", sp);  // standalone '/' is no token at all
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 3u);  // the '/'
    CHECK(!e.expected.empty());
  }
  try {
    parse_operator("p^2/2", sp);  // "2/2" lexes as a rational: not a valid exponent
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2u);
    CHECK(e.expected == std::vector<std::string>{"non-negative integer literal"});
  }
  // but rational literals carry division inside the token
  CHECK(parse_operator("(1/2)", sp) == OperatorPoly::constant(Rational(1, 2)));
  CHECK(parse_operator("(1/2)*p^2", sp) ==
        OperatorPoly::monomial(0, 2, RationalComplex{Rational(1, 2)}));
}

TEST_CASE("parse_shifted_momentum_square_matches_the_algebra") {
  // oracle: normal_order_mul applied to p + (1/2) m lambda y directly
  SymbolicParams sp = unit_params();  // m = lambda = 1
  OperatorPoly parsed = parse_operator("(p + (1/2)*m*lambda*y)^2", sp);
  OperatorPoly shifted = OperatorPoly::p() + OperatorPoly::monomial(1, 0, Rational(1, 2));
  CHECK(parsed == normal_order_mul(shifted, shifted, sp.hbar));
}

TEST_CASE("identifiers_substitute_config_values") {
  SymbolicParams sp;
  sp.m = Rational(2);
  sp.omega = Rational(3, 2);
  sp.lambda = Rational(1, 2);
  sp.hbar = Rational(1, 3);
  CHECK(parse_operator("m", sp) == OperatorPoly::constant(Rational(2)));
  CHECK(parse_operator("omega*omega", sp) == OperatorPoly::constant(Rational(9, 4)));
  CHECK(parse_operator("lambda*hbar", sp) == OperatorPoly::constant(Rational(1, 6)));
  CHECK(parse_operator("i*i", sp) == OperatorPoly::constant(Rational(-1)));
}

TEST_CASE("unknown_identifier_reports_name_and_offset") {
  try {
    parse_operator("y + 2*q", unit_params());
    FAIL("expected UnknownIdentifierError");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.name == "q");
    CHECK(e.offset == 6u);
  }
}

TEST_CASE("negative_exponent_is_its_own_error") {
  try {
    parse_operator("y^-2", unit_params());
    FAIL("expected NegativeExponentError");
  } catch (const NegativeExponentError& e) {
    CHECK(e.offset == 2u);
  }
}

TEST_CASE("exponent_must_be_a_nonnegative_integer_literal") {
  CHECK_THROWS_AS(parse_operator("y^(2)", unit_params()), ParseError);
  CHECK_THROWS_AS(parse_operator("y^p", unit_params()), ParseError);
  try {
    parse_operator("y^1/2", unit_params());  // lexes as the rational 1/2
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.expected == std::vector<std::string>{"non-negative integer literal"});
  }
  CHECK(parse_operator("y^0", unit_params()) == OperatorPoly::constant(Rational(1)));
}

TEST_CASE("syntax_errors_carry_byte_offsets_and_expectations") {
  SymbolicParams sp = unit_params();
  try {
    parse_operator("y + ", sp);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4u);
  }
  try {
    parse_operator("(y + p", sp);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.expected == std::vector<std::string>{"')'"});
  }
  CHECK_THROWS_AS(parse_operator("", sp), ParseError);
  CHECK_THROWS_AS(parse_operator("y y", sp), ParseError);  // juxtaposition is not multiplication
  CHECK_THROWS_AS(parse_operator("y $ p", sp), ParseError);
  CHECK_THROWS_AS(parse_operator("-y", sp), ParseError);  // no unary minus in the grammar
}

TEST_CASE("whitespace_is_insignificant_between_tokens") {
  SymbolicParams sp = unit_params();
  CHECK(parse_operator("  y *  p   ", sp) == parse_operator("y*p", sp));
  CHECK(parse_operator("( y + p ) ^ 2", sp) == parse_operator("(y+p)^2", sp));
}

TEST_CASE("decimal_literals_are_exact") {
  SymbolicParams sp = unit_params();
  CHECK(parse_operator("0.125", sp) == OperatorPoly::constant(Rational(1, 8)));
  CHECK(parse_operator("2.5e-1*y", sp) ==
        OperatorPoly::monomial(1, 0, RationalComplex{Rational(1, 4)}));
}

TEST_CASE("pretty_print_reparses_to_the_identical_polynomial") {
  std::mt19937 rng(83);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_int_distribution<int> expo(0, 4);
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  SymbolicParams sp = unit_params();
  for (int trial = 0; trial < 300; ++trial) {
    OperatorPoly poly;
    const int terms = nterms(rng);
    for (int t = 0; t < terms; ++t)
      poly.add_term(expo(rng), expo(rng),
                    RationalComplex{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
    CHECK(parse_operator(to_string(poly), sp) == poly);
  }
  // canonical strings of assorted shapes
  CHECK(to_string(OperatorPoly::zero()) == "0");
  CHECK(parse_operator(to_string(OperatorPoly::zero()), sp) == OperatorPoly::zero());
  OperatorPoly leading_negative = OperatorPoly::monomial(1, 0, RationalComplex{Rational(-1, 2)});
  CHECK(parse_operator(to_string(leading_negative), sp) == leading_negative);
  OperatorPoly mixed =
      OperatorPoly::monomial(2, 1, RationalComplex{Rational(-1, 3), Rational(2, 5)});
  CHECK(parse_operator(to_string(mixed), sp) == mixed);
}
