#pragma once

#include "f2ext/f2linalg.hpp"
#include "f2ext/steenrod.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace f2ext {

struct BrunerError : std::runtime_error {
    std::size_t token_index;
    BrunerError(std::size_t tok, const std::string& msg)
        : std::runtime_error(msg), token_index(tok)
    {
    }
};

/* A finite graded module in Bruner definition-file semantics: basis elements
 * g_0..g_{n-1} with non-decreasing degrees and a table of Sq^k actions.
 * Unlisted actions are zero.  The grading is cohomological: Sq^k raises
 * degree by k. */
class GradedModule {
public:
    GradedModule() = default;
    GradedModule(std::vector<int> degrees,
                 std::map<std::pair<int, int>, std::vector<int>> actions);

    int dim() const { return int(degrees_.size()); }
    int degree(int gen) const { return degrees_.at(std::size_t(gen)); }
    const std::vector<int>& degrees() const { return degrees_; }
    int min_degree() const { return degrees_.empty() ? 0 : degrees_.front(); }
    int top_degree() const { return degrees_.empty() ? -1 : degrees_.back(); }

    const std::map<std::pair<int, int>, std::vector<int>>& actions() const { return actions_; }

    /* generators of degree d, as global indices (contiguous by construction) */
    const std::vector<int>& generators_in_degree(int d) const;
    std::size_t dim_in_degree(int d) const { return generators_in_degree(d).size(); }
    /* position of gen inside its degree slice */
    int slice_index(int gen) const;

    /* Sq^k as a matrix from degree d to degree d+k; rows = source slice,
     * columns = target slice, row i = image of the i-th source generator */
    F2Matrix sq_matrix(int k, int source_degree) const;

    bool operator==(const GradedModule& o) const
    {
        return degrees_ == o.degrees_ && actions_ == o.actions_;
    }

private:
    std::vector<int> degrees_;
    std::map<std::pair<int, int>, std::vector<int>> actions_;
    std::map<int, std::vector<int>> slices_;
    std::vector<int> slice_index_;

    void build_index();
    friend GradedModule parse_module(std::string_view);
};

/* Whitespace-separated integer stream: n, n degrees, then records
 * "i k l j_1 ... j_l".  Line breaks are insignificant.  Errors carry the
 * offending token offset. */
GradedModule parse_module(std::string_view text);

/* Canonical serialization: records sorted by (i, k), target lists sorted.
 * parse(serialize(m)) == m exactly. */
std::string serialize_module(const GradedModule& m);

GradedModule trivial_module();                       /* F2 in degree 0 */
GradedModule suspend(const GradedModule& m, int k);  /* degree shift by k */
GradedModule direct_sum(const GradedModule& a, const GradedModule& b);

/* Tensor product with the Cartan diagonal action, truncated above max_deg.
 * Basis g_i (x) h_j ordered by (degree, i, j). */
GradedModule tensor(const GradedModule& a, const GradedModule& b, int max_deg);

/* A degree-homogeneous graded map family: for each source degree d a matrix
 * from the module slice at d to the slice at d + shift (row convention). */
struct GradedMap {
    int shift = 0;
    std::map<int, F2Matrix> mats;  /* keyed by source degree */

    const F2Matrix& at(int d) const;
    bool defined(int d) const { return mats.count(d) != 0; }
};

/* Left action of an admissible word Sq^{w_1}...Sq^{w_k} (applied right to
 * left) on every source degree <= max_source_deg. */
GradedMap action_of_word(const GradedModule& m, const AdmissibleWord& word, int max_source_deg);

/* Left action of a Milnor element, via its admissible expansion.  `full`
 * must be a full-profile algebra with cap >= the element degree. */
GradedMap action_of(const GradedModule& m, const MilnorElement& x, const SteenrodAlgebra& full,
                    int max_source_deg);

struct AdemViolation {
    int a, b, gen;
};

/* Check every Adem relation Sq^a Sq^b (a < 2b, a+b <= relation_top) as a
 * matrix identity against the stored actions.  Empty report = consistent. */
std::vector<AdemViolation> validate_module(const GradedModule& m, int relation_top);

}  // namespace f2ext
