#include "itc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itc {

namespace {

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

// i^k for k in [0, 3].
Complex i_power(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

} // namespace

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    for (char c : letters_) {
        if (!valid_letter(c)) {
            throw std::invalid_argument("PauliString: illegal letter '" + std::string(1, c) + "'");
        }
    }
}

PauliString PauliString::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("PauliString: empty text");
    return PauliString(text);
}

bool PauliString::is_identity() const {
    return letters_.find_first_not_of('I') == std::string::npos;
}

int PauliString::weight() const {
    return static_cast<int>(letters_.size() - static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), 'I')));
}

std::uint64_t PauliString::x_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
        if (letters_[q] == 'X' || letters_[q] == 'Y') m |= std::uint64_t{1} << q;
    }
    return m;
}

std::uint64_t PauliString::z_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
        if (letters_[q] == 'Z' || letters_[q] == 'Y') m |= std::uint64_t{1} << q;
    }
    return m;
}

int PauliString::y_count() const {
    return static_cast<int>(std::count(letters_.begin(), letters_.end(), 'Y'));
}

PauliString concat(const PauliString& a, const PauliString& b) {
    return PauliString(a.str() + b.str());
}

std::vector<PauliString> permutation_set(const PauliString& pattern) {
    if (pattern.n_qubits() == 0) throw std::invalid_argument("permutation_set: empty pattern");
    std::string letters = pattern.str();
    std::sort(letters.begin(), letters.end());
    std::vector<PauliString> out;
    do {
        out.emplace_back(letters);
    } while (std::next_permutation(letters.begin(), letters.end()));
    return out; // next_permutation enumerates in lexicographic order
}

std::vector<PauliString> cyclic_set(const PauliString& pattern) {
    if (pattern.n_qubits() == 0) throw std::invalid_argument("cyclic_set: empty pattern");
    const std::string& s = pattern.str();
    std::vector<std::string> shifts;
    for (std::size_t r = 0; r < s.size(); ++r) {
        shifts.push_back(s.substr(r) + s.substr(0, r));
    }
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    std::vector<PauliString> out;
    out.reserve(shifts.size());
    for (auto& t : shifts) out.emplace_back(std::move(t));
    return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("commutes: length mismatch");
    int clashes = 0;
    for (int q = 0; q < a.n_qubits(); ++q) {
        const char la = a.letter(q);
        const char lb = b.letter(q);
        if (la != 'I' && lb != 'I' && la != lb) ++clashes;
    }
    return clashes % 2 == 0;
}

PauliSum::PauliSum(int n_qubits, std::vector<Term> terms) : n_qubits_(n_qubits), terms_(std::move(terms)) {
    for (const Term& t : terms_) {
        if (t.string.n_qubits() != n_qubits_) {
            throw std::invalid_argument("PauliSum: term '" + t.string.str() + "' does not match qubit count");
        }
        if (!std::isfinite(t.coeff)) throw std::invalid_argument("PauliSum: non-finite coefficient");
    }
    canonicalize();
}

void PauliSum::canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.string < b.string; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (!merged.empty() && merged.back().string == t.string) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return std::abs(t.coeff) < kCoeffDropTol; });
    terms_ = std::move(merged);
}

double PauliSum::coefficient(const PauliString& s) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                               [](const Term& t, const PauliString& key) { return t.string < key; });
    if (it != terms_.end() && it->string == s) return it->coeff;
    return 0.0;
}

double PauliSum::one_norm() const {
    double sum = 0.0;
    for (const Term& t : terms_) sum += std::abs(t.coeff);
    return sum;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (terms_.empty() && n_qubits_ == 0) n_qubits_ = other.n_qubits_;
    if (n_qubits_ != other.n_qubits_) throw std::invalid_argument("PauliSum: qubit count mismatch in +=");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
}

PauliSum& PauliSum::operator*=(double factor) {
    if (!std::isfinite(factor)) throw std::invalid_argument("PauliSum: non-finite scale factor");
    for (Term& t : terms_) t.coeff *= factor;
    canonicalize();
    return *this;
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& amps) const {
    const std::int64_t dim = std::int64_t{1} << n_qubits_;
    if (amps.size() != dim) throw std::invalid_argument("PauliSum::apply: dimension mismatch");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (const Term& t : terms_) {
        const std::uint64_t xm = t.string.x_mask();
        const std::uint64_t zm = t.string.z_mask();
        const Complex base = t.coeff * i_power(t.string.y_count());
        // P|b> = i^{#Y} (-1)^{popcount(b & zm)} |b ^ xm>
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
            const Complex amp = amps(static_cast<std::int64_t>(b));
            if (amp == Complex{}) continue;
            const bool neg = std::popcount(b & zm) & 1;
            out(static_cast<std::int64_t>(b ^ xm)) += neg ? -base * amp : base * amp;
        }
    }
    return out;
}

Eigen::MatrixXcd PauliSum::to_dense(int dense_limit) const {
    if (n_qubits_ > dense_limit) {
        throw std::domain_error("PauliSum::to_dense: " + std::to_string(n_qubits_) +
                                " qubits exceeds dense limit " + std::to_string(dense_limit));
    }
    const std::int64_t dim = std::int64_t{1} << n_qubits_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const Term& t : terms_) {
        const std::uint64_t xm = t.string.x_mask();
        const std::uint64_t zm = t.string.z_mask();
        const Complex base = t.coeff * i_power(t.string.y_count());
        for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
            const bool neg = std::popcount(col & zm) & 1;
            m(static_cast<std::int64_t>(col ^ xm), static_cast<std::int64_t>(col)) += neg ? -base : base;
        }
    }
    return m;
}

double expectation(const PauliSum& h, const StateVector& psi) {
    if (h.n_qubits() != psi.n_qubits()) throw std::invalid_argument("expectation: dimension mismatch");
    return std::real(psi.amps().dot(h.apply(psi.amps())));
}

double anticommutator_expectation(const PauliSum& a, const PauliSum& b, const StateVector& psi) {
    if (a.n_qubits() != psi.n_qubits() || b.n_qubits() != psi.n_qubits()) {
        throw std::invalid_argument("anticommutator_expectation: dimension mismatch");
    }
    const Eigen::VectorXcd av = a.apply(psi.amps());
    const Eigen::VectorXcd bv = b.apply(psi.amps());
    return 2.0 * std::real(av.dot(bv));
}

PauliSum parse_hamiltonian_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n_qubits = 0;
    std::vector<PauliSum::Term> terms;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double coeff = 0.0;
        std::string pauli;
        if (!(fields >> coeff)) {
            std::string probe;
            std::istringstream(line) >> probe;
            if (probe.empty()) continue; // blank or comment-only line
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected '<coefficient> <pauli_string>'");
        }
        if (!(fields >> pauli)) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": missing Pauli string");
        }
        std::string extra;
        if (fields >> extra) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": trailing content '" + extra + "'");
        }
        PauliString s;
        try {
            s = PauliString::parse(pauli);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (terms.empty()) {
            n_qubits = s.n_qubits();
        } else if (s.n_qubits() != n_qubits) {
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": inconsistent string length " +
                                     std::to_string(s.n_qubits()) + " (expected " + std::to_string(n_qubits) + ")");
        }
        terms.push_back({coeff, std::move(s)});
    }
    if (terms.empty()) throw std::runtime_error(origin + ": no Hamiltonian terms found");
    return PauliSum(n_qubits, std::move(terms));
}

PauliSum load_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_hamiltonian: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_hamiltonian_text(buf.str(), path);
}

void save_hamiltonian(const PauliSum& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_hamiltonian: cannot open " + path);
    out.precision(17);
    for (const auto& t : h.terms()) {
        out << t.coeff << ' ' << t.string.str() << '\n';
    }
    if (!out) throw std::runtime_error("save_hamiltonian: write failed for " + path);
}

} // namespace itc
