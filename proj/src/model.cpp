#include "kernelcut/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "kernelcut/error.hpp"

namespace kernelcut {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnassignedFpr: return "UnassignedFpr";
    case ErrorCode::MalformedSchedule: return "MalformedSchedule";
    case ErrorCode::NotEvaluated: return "NotEvaluated";
    case ErrorCode::IncompatibleParents: return "IncompatibleParents";
    case ErrorCode::InsufficientSurvivors: return "InsufficientSurvivors";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::UnscheduledFpr: return "UnscheduledFpr";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidOrderBook: return "InvalidOrderBook";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateKernelId: return "duplicate_kernel_id";
    case ViolationKind::DuplicateFprId: return "duplicate_fpr_id";
    case ViolationKind::DanglingFprReference: return "dangling_fpr_reference";
    case ViolationKind::UnknownKernelInFpr: return "unknown_kernel_in_fpr";
    case ViolationKind::KernelFprMismatch: return "kernel_fpr_mismatch";
    case ViolationKind::KernelNotListed: return "kernel_not_listed";
    case ViolationKind::KernelListedTwice: return "kernel_listed_twice";
    case ViolationKind::EmptyFpr: return "empty_fpr";
    case ViolationKind::NonPositiveThickness: return "non_positive_thickness";
    case ViolationKind::NonPositivePieceCount: return "non_positive_piece_count";
    case ViolationKind::ThicknessSetMismatch: return "thickness_set_mismatch";
    case ViolationKind::FprCountMismatch: return "fpr_count_mismatch";
    case ViolationKind::OversizeKernel: return "oversize_kernel";
  }
  return "unknown";
}

std::string format_thickness(Thickness t) {
  auto tenths = t.tenths;
  std::string sign;
  if (tenths < 0) {
    sign = "-";
    tenths = -tenths;
  }
  return sign + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

OrderBook OrderBook::from_kernels(std::vector<Kernel> kernels) {
  std::map<std::string, FinishedProductReference> by_id;
  for (const auto& k : kernels) {
    auto& fpr = by_id[k.fpr_id];
    fpr.fpr_id = k.fpr_id;
    fpr.kernel_ids.push_back(k.kernel_id);
    fpr.thickness_set.insert(k.thickness);
  }
  OrderBook book;
  book.kernels = std::move(kernels);
  for (auto& [id, fpr] : by_id) book.fprs.push_back(std::move(fpr));
  book.n_fprs = book.fprs.size();
  return book;
}

const Kernel* OrderBook::find_kernel(const std::string& kernel_id) const {
  auto it = std::find_if(kernels.begin(), kernels.end(),
                         [&](const Kernel& k) { return k.kernel_id == kernel_id; });
  return it == kernels.end() ? nullptr : &*it;
}

const FinishedProductReference* OrderBook::find_fpr(const std::string& fpr_id) const {
  auto it = std::find_if(fprs.begin(), fprs.end(),
                         [&](const FinishedProductReference& f) { return f.fpr_id == fpr_id; });
  return it == fprs.end() ? nullptr : &*it;
}

ValidationReport validate_order_book(const OrderBook& book) {
  ValidationReport report;
  auto flag = [&](ViolationKind kind, const std::string& subject, std::string message) {
    report.violations.push_back({kind, subject, std::move(message)});
  };

  std::unordered_map<std::string, const Kernel*> kernels;
  for (const auto& k : book.kernels) {
    if (!kernels.emplace(k.kernel_id, &k).second) {
      flag(ViolationKind::DuplicateKernelId, k.kernel_id, "kernel id appears more than once");
    }
    if (k.thickness.tenths < 1) {
      flag(ViolationKind::NonPositiveThickness, k.kernel_id,
           "thickness must be >= 1 tenth of a millimetre");
    }
    if (k.piece_count < 1) {
      flag(ViolationKind::NonPositivePieceCount, k.kernel_id, "piece_count must be >= 1");
    }
    if (k.oversize) {
      report.warnings.push_back({ViolationKind::OversizeKernel, k.kernel_id,
                                 "exceeds cutting limits; excluded from batching"});
    }
  }

  std::unordered_set<std::string> fpr_ids;
  std::unordered_map<std::string, int> listed;
  for (const auto& fpr : book.fprs) {
    if (!fpr_ids.insert(fpr.fpr_id).second) {
      flag(ViolationKind::DuplicateFprId, fpr.fpr_id, "FPR id appears more than once");
    }
    if (fpr.kernel_ids.empty()) {
      flag(ViolationKind::EmptyFpr, fpr.fpr_id, "FPR lists no kernels");
    }
    std::set<Thickness> derived;
    for (const auto& kid : fpr.kernel_ids) {
      auto it = kernels.find(kid);
      if (it == kernels.end()) {
        flag(ViolationKind::UnknownKernelInFpr, fpr.fpr_id, "lists unknown kernel " + kid);
        continue;
      }
      if (it->second->fpr_id != fpr.fpr_id) {
        flag(ViolationKind::KernelFprMismatch, kid,
             "listed by " + fpr.fpr_id + " but carries fpr_id " + it->second->fpr_id);
      }
      if (++listed[kid] == 2) {
        flag(ViolationKind::KernelListedTwice, kid, "kernel listed by more than one FPR entry");
      }
      derived.insert(it->second->thickness);
    }
    if (derived != fpr.thickness_set) {
      flag(ViolationKind::ThicknessSetMismatch, fpr.fpr_id,
           "thickness_set differs from the union of member kernel thicknesses");
    }
  }

  for (const auto& k : book.kernels) {
    if (!fpr_ids.contains(k.fpr_id)) {
      flag(ViolationKind::DanglingFprReference, k.kernel_id,
           "references FPR " + k.fpr_id + " which is not in the order book");
    } else if (!listed.contains(k.kernel_id)) {
      flag(ViolationKind::KernelNotListed, k.kernel_id,
           "not listed by its FPR " + k.fpr_id);
    }
  }

  if (book.n_fprs != book.fprs.size()) {
    flag(ViolationKind::FprCountMismatch, "",
         "n_fprs=" + std::to_string(book.n_fprs) + " but " + std::to_string(book.fprs.size()) +
             " FPRs are listed");
  }
  return report;
}

}  // namespace kernelcut
