//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/error.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * Violated precondition or malformed input.
 *
 * All library entry points validate their arguments and throw this (rather
 * than asserting) so that CLI users get a readable message.
 */
class InvalidInput : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! A computation was asked to do more work than its configured budget
class BudgetExceeded : public std::length_error
{
  public:
    using std::length_error::length_error;
};

namespace detail
{
inline void require(bool cond, std::string const& msg)
{
    if (!cond)
    {
        throw InvalidInput(msg);
    }
}
}  // namespace detail

//---------------------------------------------------------------------------//
}  // namespace prag
