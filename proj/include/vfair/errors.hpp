#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfair {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A relation that is not irreflexive or not acyclic.
class InvalidMessage : public Error
{
public:
    InvalidMessage(const std::string& what, std::vector<std::size_t> witness)
        : Error(what), witness_(std::move(witness))
    {
    }

    /// For a reflexive pair: the single offending state. For a cycle: the
    /// states along the cycle, first state repeated at the end.
    const std::vector<std::size_t>& witness() const { return witness_; }

private:
    std::vector<std::size_t> witness_;
};

class UnknownId : public Error
{
public:
    using Error::Error;
};

class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// An enumeration would exceed its configured cap.
class CapExceeded : public Error
{
public:
    CapExceeded(const std::string& what, std::uint64_t count, std::uint64_t cap)
        : Error(what + " (" + std::to_string(count) + " > cap " + std::to_string(cap) + ")"),
          count_(count), cap_(cap)
    {
    }

    std::uint64_t count() const { return count_; }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t count_;
    std::uint64_t cap_;
};

/// A zone or state selector broke its contract during a run.
class SelectorViolation : public Error
{
public:
    using Error::Error;
};

/// No admissible zone / empty menu for an officer: the bound system is not
/// sequentially solvent for this arrival order.
class NoAdmissibleZone : public Error
{
public:
    NoAdmissibleZone(const std::string& what, std::size_t officer) : Error(what), officer_(officer) {}

    std::size_t officer() const { return officer_; }

private:
    std::size_t officer_;
};

/// A submitted ranking is not a strict total order on the presented menu.
class InvalidRanking : public Error
{
public:
    using Error::Error;
};

} // namespace vfair
