#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace kernelcut {

// Front thickness in tenths of a millimetre. Batching and setup counting rely on
// exact equality, so this is integral.
struct Thickness {
  std::int32_t tenths = 0;

  auto operator<=>(const Thickness&) const = default;
};

// "180" -> "18.0"
std::string format_thickness(Thickness t);

// Indivisible lot of fronts: one customer, one colour, one process route.
struct Kernel {
  std::string kernel_id;
  std::string fpr_id;
  Thickness thickness;
  std::int64_t piece_count = 1;
  // Beyond the cutting machine's dimensional limits; handled elsewhere.
  bool oversize = false;

  bool operator==(const Kernel&) const = default;
};

// All fronts forming one kitchen.
struct FinishedProductReference {
  std::string fpr_id;
  std::vector<std::string> kernel_ids;
  std::set<Thickness> thickness_set;

  bool operator==(const FinishedProductReference&) const = default;
};

struct OrderBook {
  std::vector<Kernel> kernels;
  std::vector<FinishedProductReference> fprs;
  std::size_t n_fprs = 0;

  // Derives the FPR list (sorted by fpr_id, kernel ids in input order) from
  // the kernels alone.
  static OrderBook from_kernels(std::vector<Kernel> kernels);

  const Kernel* find_kernel(const std::string& kernel_id) const;
  const FinishedProductReference* find_fpr(const std::string& fpr_id) const;

  bool operator==(const OrderBook&) const = default;
};

enum class ViolationKind {
  DuplicateKernelId,
  DuplicateFprId,
  DanglingFprReference,
  UnknownKernelInFpr,
  KernelFprMismatch,
  KernelNotListed,
  KernelListedTwice,
  EmptyFpr,
  NonPositiveThickness,
  NonPositivePieceCount,
  ThicknessSetMismatch,
  FprCountMismatch,
  OversizeKernel,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // kernel or FPR identifier the finding is about
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Oversize kernels; informational, they do not make the book invalid.
  std::vector<Violation> warnings;

  bool valid() const { return violations.empty(); }
  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate_order_book(const OrderBook& book);

}  // namespace kernelcut
