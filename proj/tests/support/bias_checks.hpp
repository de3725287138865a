#pragma once

#include <gtest/gtest.h>

#include "augbias/bias/measure.hpp"

namespace augbias::oracle {

// bias == acc_train - acc_test exactly, accuracies in [0, 1], bias in [-1, 1].
inline ::testing::AssertionResult eq4_holds(const BiasReport& r) {
    if (r.bias != r.acc_train - r.acc_test)
        return ::testing::AssertionFailure() << "bias " << r.bias << " != " << r.acc_train << " - " << r.acc_test;
    if (r.acc_train < 0.0 || r.acc_train > 1.0 || r.acc_test < 0.0 || r.acc_test > 1.0)
        return ::testing::AssertionFailure() << "accuracy out of [0,1]";
    if (r.bias < -1.0 || r.bias > 1.0) return ::testing::AssertionFailure() << "bias out of [-1,1]";
    return ::testing::AssertionSuccess();
}

}  // namespace augbias::oracle
