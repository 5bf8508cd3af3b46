/* C interface to the promise-CSP sandwich toolkit.
 *
 * All objects are opaque handles created by *_parse / *_build functions and
 * released with the matching *_free. Functions that produce text return a
 * malloc'd string through an out parameter; release it with
 * pcsp_string_free. Status codes double as CLI exit codes:
 *
 *   0  yes / sat / holds / valid / found / in P
 *   1  no / unsat / fails / invalid / refuted / NP-complete
 *   2  usage or input error (see pcsp_last_error())
 *   3  unknown: a search or enumeration budget was exhausted
 *
 * Budgets <= 0 select the library default (PCSP_BUDGET environment variable,
 * else 10^7).
 */
#ifndef PCSP_H
#define PCSP_H

#ifdef __cplusplus
extern "C" {
#endif

enum {
    PCSP_YES = 0,
    PCSP_NO = 1,
    PCSP_ERR = 2,
    PCSP_UNKNOWN = 3,
};

typedef struct pcsp_structure pcsp_structure;
typedef struct pcsp_instance pcsp_instance;
typedef struct pcsp_witness pcsp_witness;
typedef struct pcsp_map pcsp_map;
typedef struct pcsp_thm1 pcsp_thm1;
typedef struct pcsp_thm2 pcsp_thm2;

/* Message describing the most recent PCSP_ERR on this thread. */
const char* pcsp_last_error(void);
void pcsp_string_free(char* s);

/* ---- parsing and serialization (canonical text formats) ---- */

pcsp_structure* pcsp_structure_parse(const char* text);
int pcsp_structure_serialize(const pcsp_structure* s, char** out);
int pcsp_structure_domain_size(const pcsp_structure* s);
/* Member count of the index-th relation; -1 when too large to represent. */
long long pcsp_structure_relation_size(const pcsp_structure* s, int index);
void pcsp_structure_free(pcsp_structure* s);

pcsp_instance* pcsp_instance_parse(const char* text);
int pcsp_instance_serialize(const pcsp_instance* inst, char** out);
void pcsp_instance_free(pcsp_instance* inst);

pcsp_witness* pcsp_witness_parse(const char* text);
int pcsp_witness_serialize(const pcsp_witness* w, char** out);
void pcsp_witness_free(pcsp_witness* w);

pcsp_map* pcsp_map_parse(const char* text);
int pcsp_map_serialize(const pcsp_map* m, char** out);
void pcsp_map_free(pcsp_map* m);

/* ---- constructions ---- */

pcsp_thm1* pcsp_thm1_build(int n, int p, long long materialize_threshold);
/* which: 'A', 'B' or 'C'; returns a fresh handle. */
pcsp_structure* pcsp_thm1_structure(const pcsp_thm1* b, char which);
/* which: 'g' or 'h'. */
pcsp_map* pcsp_thm1_map(const pcsp_thm1* b, char which);
void pcsp_thm1_free(pcsp_thm1* b);

pcsp_thm2* pcsp_thm2_build(int p, int allow_small);
pcsp_structure* pcsp_thm2_structure(const pcsp_thm2* b, char which);
pcsp_map* pcsp_thm2_map(const pcsp_thm2* b); /* h */
pcsp_witness* pcsp_thm2_witness(const pcsp_thm2* b);
/* Space-separated entries of the witness vector u. */
int pcsp_thm2_u(const pcsp_thm2* b, char** out);
void pcsp_thm2_free(pcsp_thm2* b);

/* ---- homomorphisms and polymorphisms ---- */

int pcsp_find_homomorphism(const pcsp_structure* from, const pcsp_structure* to,
                           long long budget, pcsp_map** out);
int pcsp_is_homomorphism(const pcsp_map* f, const pcsp_structure* from,
                         const pcsp_structure* to);
/* out_core receives the core, out_vertices the chosen original vertices. */
int pcsp_core_of(const pcsp_structure* s, long long budget, pcsp_structure** out_core,
                 char** out_vertices);
/* summary receives "outcome=... candidates=... nodes=..."; table receives the
 * found function table, when any, as "table n=N p=P m=M values ...". */
int pcsp_find_cyclic_polymorphism(const pcsp_structure* a, const pcsp_structure* b, int p,
                                  long long budget, int allow_nonprime, char** summary,
                                  char** table);
int pcsp_find_majority_polymorphism(const pcsp_structure* a, long long budget, char** summary,
                                    char** table);
int pcsp_verify_witness(const pcsp_structure* a, const pcsp_structure* b, const pcsp_witness* w,
                        long long budget, char** reason);
/* Reports which side failed ("left"/"right") through detail on PCSP_NO. */
int pcsp_check_sandwich(const pcsp_structure* a, const pcsp_structure* c,
                        const pcsp_structure* b, long long budget, pcsp_map** out_left,
                        pcsp_map** out_right, char** detail);

/* ---- affine solving ---- */

/* assignment receives "assignment v0 v1 ..." on PCSP_YES. */
int pcsp_solve_affine(const pcsp_structure* c, const pcsp_instance* inst, char** assignment);
/* Verifies the sandwich a -> via -> b, then decides through via. */
int pcsp_pcsp_decide(const pcsp_structure* a, const pcsp_structure* b,
                     const pcsp_structure* via, const pcsp_instance* inst, long long budget,
                     char** detail);

/* ---- claim verification ---- */

/* report receives one machine line per claim. Return: PCSP_YES when every
 * claim holds (hypothesis skips allowed), PCSP_NO on any failure,
 * PCSP_UNKNOWN when a budget skip occurred. */
int pcsp_verify_lemma32(int n, int p, long long budget, char** report);
int pcsp_verify_thm2_claims(int p, char** report);
int pcsp_verify_thm31(int n, int p, long long budget, char** report);
int pcsp_verify_lemma41(const pcsp_structure* a, const pcsp_structure* c, const pcsp_map* g,
                        char** report);

/* ---- certificates ---- */

int pcsp_certify_with_witness(const pcsp_structure* a, const pcsp_structure* b, int p,
                              const pcsp_witness* w, long long budget, char** certificate);
int pcsp_certify_exhaustive(const pcsp_structure* a, const pcsp_structure* b, int p,
                            long long budget, char** certificate);
/* Re-checks a serialized certificate from scratch. */
int pcsp_certificate_recheck(const char* text, long long budget, char** detail);

/* ---- graphs and digraphs (structures with one binary relation) ---- */

int pcsp_graph_classify(const pcsp_structure* g, char** detail);
int pcsp_digraph_smooth_part(const pcsp_structure* g, pcsp_structure** out,
                             char** out_vertices);
int pcsp_digraph_classify(const pcsp_structure* g, long long budget, char** detail);
int pcsp_digraph_solve_cycles(const pcsp_structure* target, const pcsp_structure* instance,
                              pcsp_map** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif
