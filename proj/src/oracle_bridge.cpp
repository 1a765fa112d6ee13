#include "extforge/comod.hpp"
#include "extforge/oracle.hpp"

// Reads a module's stored action tables as coaction data. This is the only
// place the oracle sees engine types, and it copies matrices without using
// any product table.
namespace extforge::oracle {

Comodule comodule_of(const FiniteModule& m) {
    Comodule c;
    for (const auto& b : m.basis()) c.degree.push_back(b.degree);
    if (!m.dim()) return c;
    int span = m.max_degree() - m.min_degree();
    for (int d = 1; d <= span; ++d)
        for (const auto& r : basis_in_degree(m.profile(), d)) {
            BitMatrix a = m.action(r);
            if (!a.is_zero()) c.coaction[r] = std::move(a);
        }
    return c;
}

}  // namespace extforge::oracle
