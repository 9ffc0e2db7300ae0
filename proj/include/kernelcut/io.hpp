#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "kernelcut/error.hpp"
#include "kernelcut/model.hpp"

namespace kernelcut::io {

enum class OrderFormat { Csv, Json };

// "csv" / "json"; throws ParseError otherwise.
OrderFormat order_format_from_string(std::string_view name);

// Validation failure while ingesting orders; carries the full report.
class InvalidOrderBookError : public Error {
 public:
  explicit InvalidOrderBookError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// CSV: header "kernel_id,fpr_id,thickness_tenths_mm,piece_count,oversize".
// JSON: {"kernels": [...], "fprs": [...]?, "n_fprs": N?}; FPRs are derived
// from the kernels when absent. Throws ParseError with a line number.
OrderBook parse_orders_unchecked(std::istream& in, OrderFormat format);
// As above, then throws InvalidOrderBookError when validation fails.
OrderBook parse_orders(std::istream& in, OrderFormat format);

std::string serialize_orders(const OrderBook& book, OrderFormat format);

std::string sha256_hex(std::string_view data);

// Digest of a canonical form: independent of kernel and FPR listing order and
// of the encoding the book was read from.
std::string order_digest(const OrderBook& book);

}  // namespace kernelcut::io
