#ifndef RBP_RBP_HPP
#define RBP_RBP_HPP

// Umbrella header.

#include "rbp/basis_pursuit.hpp"
#include "rbp/generators.hpp"
#include "rbp/harness.hpp"
#include "rbp/linalg.hpp"
#include "rbp/matrix.hpp"
#include "rbp/oracle.hpp"
#include "rbp/orthonormal_basis.hpp"
#include "rbp/random.hpp"
#include "rbp/rank_free.hpp"
#include "rbp/stability.hpp"
#include "rbp/svd_oracle.hpp"

#endif // RBP_RBP_HPP
