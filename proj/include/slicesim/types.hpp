#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace slicesim {

using Matrix = Eigen::MatrixXd;
using IntMatrix = Eigen::MatrixXi;
using Vector = Eigen::VectorXd;

/// Channel and traffic realization of one time slot.
struct SlotState {
    Matrix embb_gain;   // K x B, linear power gains
    Matrix urllc_gain;  // N x B, linear power gains
    int arrivals = 0;   // URLLC packets arriving during the slot
    std::int64_t slot_index = 0;

    int num_embb_users() const { return static_cast<int>(embb_gain.rows()); }
    int num_rbs() const { return static_cast<int>(embb_gain.cols()); }
    int num_urllc_users() const { return static_cast<int>(urllc_gain.rows()); }
};

/// Decision variables of one slot. All matrices are K x B.
///
/// `x` is binary in a final allocation and fractional inside the relaxed
/// RB subproblem; `w` is the continuous puncturing weight and `z` the number of
/// punctured mini-slots actually executed.
struct Allocation {
    Matrix x;
    Matrix p;
    Matrix w;
    IntMatrix z;

    static Allocation zeros(int users, int rbs) {
        return {Matrix::Zero(users, rbs), Matrix::Zero(users, rbs), Matrix::Zero(users, rbs),
                IntMatrix::Zero(users, rbs)};
    }

    int num_users() const { return static_cast<int>(x.rows()); }
    int num_rbs() const { return static_cast<int>(x.cols()); }

    /// Owner of RB `b` in a binary allocation, or -1 when unallocated.
    int owner(int b) const {
        for (int k = 0; k < x.rows(); ++k) {
            if (x(k, b) > 0.5) return k;
        }
        return -1;
    }
};

}  // namespace slicesim
