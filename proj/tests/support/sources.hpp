// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_TESTS_SUPPORT_SOURCES_HPP
#define PARMOR_TESTS_SUPPORT_SOURCES_HPP

#include <atomic>
#include <utility>

#include "parmor/fom.hpp"
#include "parmor/types.hpp"

namespace parmor::test {

// Transfer source that returns a fixed matrix for every (s, p); handy for
// pinning exact loss values.
class ConstSource : public parmor::TransferSource {
public:
  ConstSource(parmor::CMat value, parmor::Box domain)
    : value_(std::move(value)), domain_(std::move(domain))
  {
  }

  parmor::Index n_u() const override { return value_.cols(); }
  parmor::Index n_y() const override { return value_.rows(); }
  const parmor::Box &domain() const override { return domain_; }
  parmor::CMat eval(parmor::Complex, const parmor::Vec &) const override
  {
    calls_++;
    return value_;
  }

  long calls() const { return calls_.load(); }

private:
  parmor::CMat value_;
  parmor::Box domain_;
  mutable std::atomic<long> calls_{0};
};

inline parmor::Box unit_domain(parmor::Index dim = 1)
{
  parmor::Box box{parmor::Vec::Zero(dim), parmor::Vec::Ones(dim)};
  return box;
}

} // namespace parmor::test

#endif // PARMOR_TESTS_SUPPORT_SOURCES_HPP
