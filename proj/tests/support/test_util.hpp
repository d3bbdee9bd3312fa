#ifndef AMFH_TESTS_TEST_UTIL_HPP_
#define AMFH_TESTS_TEST_UTIL_HPP_

#include <gtest/gtest.h>

#include "amfh/common.hpp"

// Error code raised by `f`; records a failure when nothing is thrown.
template <typename F>
amfh::ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const amfh::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected amfh::Error";
  return amfh::ErrorCode::kIo;
}

#endif  // AMFH_TESTS_TEST_UTIL_HPP_
