#include "nsdwt/polymatrix.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace nsdwt {

PolyMatrix4 poly_identity() {
    PolyMatrix4 m = PolyMatrix4::Constant(LaurentPoly2());
    for (int i = 0; i < 4; ++i) {
        m(i, i) = LaurentPoly2(1);
    }
    return m;
}

PolyMatrix4 transpose_polys(const PolyMatrix4& m) {
    return m.unaryExpr([](const LaurentPoly2& p) { return transpose(p); });
}

bool is_constant_only(const PolyMatrix4& m) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (!m(r, c).is_constant()) {
                return false;
            }
        }
    }
    return true;
}

bool is_diagonal(const PolyMatrix4& m) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r != c && !m(r, c).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Determinant of the 3x3 minor obtained by deleting row `skip_r` and
// column `skip_c`.
LaurentPoly2 minor3(const PolyMatrix4& m, int skip_r, int skip_c) {
    std::array<int, 3> rows{};
    std::array<int, 3> cols{};
    for (int i = 0, k = 0; i < 4; ++i) {
        if (i != skip_r) {
            rows[k++] = i;
        }
    }
    for (int i = 0, k = 0; i < 4; ++i) {
        if (i != skip_c) {
            cols[k++] = i;
        }
    }
    auto e = [&](int i, int j) -> const LaurentPoly2& { return m(rows[i], cols[j]); };
    LaurentPoly2 d;
    d += e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1));
    d -= e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0));
    d += e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    return d;
}

}  // namespace

LaurentPoly2 determinant(const PolyMatrix4& m) {
    LaurentPoly2 d;
    for (int c = 0; c < 4; ++c) {
        if (m(0, c).is_zero()) {
            continue;
        }
        LaurentPoly2 term = m(0, c) * minor3(m, 0, c);
        if (c % 2 == 0) {
            d += term;
        } else {
            d -= term;
        }
    }
    return d;
}

PolyMatrix4 inverse(const PolyMatrix4& m) {
    const LaurentPoly2 det = determinant(m);
    if (!det.is_monomial()) {
        throw std::domain_error("matrix is not invertible over Laurent polynomials (det = " + det.str() + ")");
    }
    const auto& [e, c] = *det.terms().begin();
    const LaurentPoly2 det_inv = LaurentPoly2::monomial(c.reciprocal(), -e.a, -e.b);
    PolyMatrix4 inv;
    for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) {
            // adjugate is the transposed cofactor matrix
            LaurentPoly2 cof = minor3(m, col, r);
            if ((r + col) % 2 != 0) {
                cof = -cof;
            }
            inv(r, col) = cof * det_inv;
        }
    }
    return inv;
}

int count_macs(const PolyMatrix4& m) {
    int macs = 0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const LaurentPoly2& p = m(r, c);
            int n = static_cast<int>(p.term_count());
            if (r == c && p.constant_term().is_one()) {
                --n;
            }
            macs += n;
        }
    }
    return macs;
}

int count_copies(const PolyMatrix4& m) {
    int copies = 0;
    for (int i = 0; i < 4; ++i) {
        if (m(i, i).constant_term().is_one()) {
            ++copies;
        }
    }
    return copies;
}

std::string render(const PolyMatrix4& m) {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < 4; ++r) {
        if (r != 0) {
            os << "; ";
        }
        for (int c = 0; c < 4; ++c) {
            if (c != 0) {
                os << ", ";
            }
            os << m(r, c).str();
        }
    }
    os << ']';
    return os.str();
}

}  // namespace nsdwt
