#ifndef EISENSTEIN_KERNEL_H
#define EISENSTEIN_KERNEL_H

#include <stdint.h>

enum {
    EK_BSGS = 0,
    EK_FULL_WALK = 1,
    EK_SYMMETRY_FALLBACK = 2,
    EK_CAP_FALLBACK = 3,
    EK_FAULT_FALLBACK = 4
};

enum { EK_STORE_EXACT = 0, EK_STORE_BLOOM = 1 };

/* error codes; 0 is success */
enum { EK_OK = 0, EK_EBADD = 1, EK_EARITH = 2, EK_ENOMEM = 3 };

typedef struct {
    int t;               /* discrete log of eps_d mod 2O_K in Z/3 */
    int method;
    int64_t baby_steps;
    int64_t giant_steps;
    int64_t store_size;
    double regulator;    /* ln(eps_d), approximate */
    int64_t valuation_faults;
    int64_t arith_faults;
    int64_t bloom_false_positives;
} ek_result;

/* table[1], table[2], table[3]: logs of the parity classes (1,0), (0,1), (1,1) */
int ek_eisenstein(int64_t d, int backend, double fpr, const int *table, ek_result *out);
int ek_full_walk(int64_t d, const int *table, ek_result *out);

#endif
