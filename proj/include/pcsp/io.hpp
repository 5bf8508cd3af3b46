#ifndef PCSP_IO_HPP
#define PCSP_IO_HPP

#include <string>

#include "pcsp/affine.hpp"
#include "pcsp/digraph.hpp"
#include "pcsp/hom.hpp"
#include "pcsp/structure.hpp"
#include "pcsp/verify.hpp"

namespace pcsp {

// Line-oriented UTF-8 text formats; '#' starts a comment, blank lines are
// ignored on parse, and serialization is canonical (tuples sorted, single
// spaces) so parse/serialize round trips are byte-stable.

std::string serialize_structure(const Structure& s);
Structure parse_structure(const std::string& text);

std::string serialize_instance(const CspInstance& inst);
CspInstance parse_instance(const std::string& text);

std::string serialize_witness(const ObstructionWitness& w);
ObstructionWitness parse_witness(const std::string& text);

std::string serialize_map(const Homomorphism& h);
Homomorphism parse_map(const std::string& text);

std::string serialize_matrix(const ModMatrix& m);
ModMatrix parse_matrix(const std::string& text);

std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace pcsp

#endif
