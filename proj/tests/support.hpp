#pragma once

#include <gtest/gtest.h>

#include "generators.hpp"

#define EXPECT_MAT_NEAR(actual, expected, tol)                                                         \
  EXPECT_LE(::orcalc::rel_distance((actual), (expected)), (tol)) << "actual:\n"                       \
                                                                 << (actual) << "\nexpected:\n" << (expected)

#define EXPECT_THROW_KIND(stmt, k)                        \
  try {                                                   \
    stmt;                                                 \
    ADD_FAILURE() << "expected " << ::orcalc::to_string(k); \
  } catch (const ::orcalc::Error& e) {                    \
    EXPECT_EQ(e.kind(), k) << e.what();                   \
  }
