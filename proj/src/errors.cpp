#include "fcesched/errors.hpp"

namespace fcesched {

namespace {

std::string describe_orders(const std::vector<std::size_t> &orders) {
    std::string msg = "bitstring is not one-hot in order(s)";
    for (std::size_t n : orders) {
        msg += ' ';
        msg += std::to_string(n);
    }
    return msg;
}

} // namespace

InfeasibleError::InfeasibleError(std::vector<std::size_t> orders)
    : Error(describe_orders(orders)), orders_(std::move(orders)) {}

ParseError::ParseError(std::size_t line, const std::string &what)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

} // namespace fcesched
