#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffalg/derivative.hpp"
#include "diffalg/jet.hpp"

namespace diffalg {

// Outcome of checking one identity against one jet.
struct AssignmentVerdict {
    bool pass = false;

    // False when evaluation threw; `error` then carries the reason and the
    // remaining fields are meaningless.
    bool evaluated = false;

    // Valuation of lhs - rhs; nullopt when the difference vanished within
    // the truncation window.
    std::optional<int> difference_valuation;

    StandardPart lhs_st;
    StandardPart rhs_st;

    std::string error;
};

/*
 * Outcome of checking one identity. The symbolic side normalizes
 * lhs - rhs with derivative nodes expanded and asks for literal zero;
 * each numeric verdict evaluates both sides at one jet and compares per
 * the identity's check mode: exact wants the difference to vanish within
 * the window, leading order accepts an infinitesimal difference
 * (standard part zero, valuation at least 1).
 *
 * pass is symbolic_pass and every numeric verdict, and the outcome is as
 * expected when pass disagrees with the identity's expect_failure flag.
 */
struct IdentityReport {
    std::string name;
    bool expect_failure = false;

    bool symbolic_pass = false;
    Expr symbolic_difference;

    std::vector<AssignmentVerdict> numeric;

    bool pass = false;
    bool expected_outcome_met = false;
};

IdentityReport verify_identity(const Identity& id,
                               const std::vector<JetAssignment>& assignments);

/*
 * Check the whole identity_catalog. Every identity gets its worked jet
 * (the concrete polynomials its rule is usually demonstrated on, e.g.
 * y = x^3, x = t^2 at q0 = 1 for the chain rules) followed by `count`
 * seeded random polynomial jets; count = 0 skips evaluation entirely and
 * reports symbolic verdicts only. Deterministic for a fixed seed, and
 * jets are resampled while any stepped variable has a vanishing one-step
 * increment so divisions stay well defined.
 */
std::vector<IdentityReport> run_identity_suite(std::uint64_t seed, int count);

// One catalog identity by name over the same jets the suite would give it
// (worked jet plus `count` seeded random ones). Throws UnknownIdentity.
IdentityReport run_identity(const std::string& name, std::uint64_t seed, int count);

// Fixed-layout text: one block per report with per-jet valuations and
// standard parts as exact rationals.
std::string report_to_text(const IdentityReport& r);
std::string reports_to_text(const std::vector<IdentityReport>& rs);

// The same content as a JSON array, one object per report.
std::string reports_to_json(const std::vector<IdentityReport>& rs);

}  // namespace diffalg
