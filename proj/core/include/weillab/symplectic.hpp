#pragma once

#include <complex>
#include <map>
#include <vector>

#include "weillab/linalg.hpp"

namespace weillab {

/// Symplectic vector space (V, omega) over a finite field; dim V = 2n. The
/// Gram matrix defaults to the standard block form [[0, I], [-I, 0]], i.e.
/// omega(e_i, e_{n+i}) = 1. The field object must outlive the space.
struct SympSpace {
    const Fq* F = nullptr;
    int n = 0;
    MatFq gram;

    static SympSpace standard(const Fq* F, int n);

    int dim() const { return 2 * n; }
    Fe omega(const VecFq& u, const VecFq& v) const;
    VecFq zero_vec() const { return VecFq(static_cast<size_t>(dim()), F->zero()); }
};

/// Membership test for Sp(V, omega): g^T * gram * g == gram, exactly.
bool is_symplectic(const MatFq& g, const SympSpace& space);

/// Cayley transform (g + I)(g - I)^{-1}; requires det(g - I) != 0.
MatFq cayley(const MatFq& g);

/// Symplectic transpose gram^{-1} R^T gram, the adjoint w.r.t. omega:
/// omega(Rv, u) = omega(v, R^t u). Involution; equals g^{-1} on Sp.
MatFq symp_transpose(const MatFq& R, const SympSpace& space);

/// Symplectic transvection x -> x + lambda * omega(x, u) * u.
MatFq transvection(const SympSpace& space, const VecFq& u, const Fe& lambda);

/// Pseudo-uniform element of Sp(V, omega): a product of random transvections.
MatFq random_symplectic(const SympSpace& space, Rng& rng);

/// All of SL_2(F_q) by enumeration (test- and census-scale fields only).
std::vector<MatFq> enumerate_sl2(const Fq& F);

/// Block embedding Sp(2n1) x Sp(2n2) -> Sp(2(n1+n2)) preserving the standard
/// form: block i acts on span(e_i .. | .. e_{n+i} ..) coordinates.
MatFq interleave(const MatFq& g1, int n1, const MatFq& g2, int n2);
VecFq interleave_vec(const VecFq& v1, int n1, const VecFq& v2, int n2);
/// Component extraction inverse to interleave_vec.
std::pair<VecFq, VecFq> split_vec(const VecFq& v, int n1, int n2);

enum class TorusKind { Split, Inert };

/// Explicit finite abelian subgroup of Sp together with independent
/// generators and its full character group. Elements are stored in mixed-
/// radix exponent order over the generators: element k has exponent vector
/// decode(k) and equals prod_i gen_i^{e_i}. Characters are indexed the same
/// way; character j evaluates on element k as prod_i exp(2 pi i j_i e_i / m_i).
class TorusData {
public:
    SympSpace space;
    std::vector<MatFq> elements;
    std::vector<MatFq> generators;
    std::vector<int64_t> orders;

    int64_t order() const { return static_cast<int64_t>(elements.size()); }
    int64_t num_chars() const { return order(); }

    std::vector<int64_t> decode(int64_t index) const;
    int64_t encode(const std::vector<int64_t>& exps) const;

    /// Index of g in the element list, or -1.
    int64_t find(const MatFq& g) const;
    bool contains(const MatFq& g) const { return find(g) >= 0; }

    std::complex<double> chi(int64_t chi_index, int64_t elem_index) const;
    int64_t chi_inverse(int64_t chi_index) const;
    /// Pointwise product of two characters.
    int64_t chi_mul(int64_t a, int64_t b) const;

    /// The unique character of order 2; throws StructureViolation if it is
    /// not unique (non-cyclic two-torsion) or absent.
    int64_t quadratic_chi() const;

    bool is_cyclic() const { return generators.size() <= 1; }

    /// Lines of V fixed by the whole torus; eigenvector test for the
    /// exponential-sum side conditions.
    bool is_eigenvector(const VecFq& v) const;

private:
    friend TorusData torus_from_elements(const SympSpace& space, std::vector<MatFq> elems);
    std::map<std::vector<int64_t>, int64_t> index_;
    void rebuild_index();
};

/// Builds TorusData from a closed abelian element set: extracts independent
/// generators greedily (maximal order first, corrections chosen so orders
/// multiply to |T|) and re-enumerates elements in exponent order.
TorusData torus_from_elements(const SympSpace& space, std::vector<MatFq> elems);

/// Maximal tori of SL_2(F_q) = Sp(2, F_q): the split torus {diag(a, a^{-1})}
/// of order q-1, or the inert torus {[[a, rb], [b, a]] : a^2 - r b^2 = 1}
/// of order q+1 with r the canonical non-square.
TorusData sl2_torus(const Fq& F, TorusKind kind);

/// Centralizer torus of a regular symplectic element: all symplectic members
/// of the commutative algebra F_q[A], by enumeration. Throws NotRegular if
/// the characteristic polynomial of A is not squarefree.
TorusData centralizer_torus(const MatFq& A, const SympSpace& space);

/// Interleaved direct product of two tori (rank-2 block tori and friends).
TorusData product_torus(const TorusData& t1, const TorusData& t2);

/// Smallest non-square of F_q in element-index order.
Fe canonical_nonsquare(const Fq& F);

}  // namespace weillab
