#pragma once

#include "pnmf/kernels.hpp"

namespace pnmf::kernels::detail {
const KernelTable& avx2_table();
}
