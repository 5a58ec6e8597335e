/* Residue of the fundamental unit mod 2O_K by baby-step giant-step walking
 * of the principal cycle.  Mirrors eisenstein/infrastructure.py step for
 * step; the Python module is the reference. */

#include "kernel.h"

#include <math.h>
#include <stdlib.h>
#include <string.h>

typedef __int128 i128;
typedef unsigned __int128 u128;
typedef int64_t i64;

#define MIN_PERIOD_LOG 0.1
#define PLAIN_PRODUCT_MAX_Q 50
#define REDUCE_MAX_STEPS 100000

typedef struct { int v, t; } vres;

typedef struct {
    i64 d, s;       /* d and floor(sqrt d) */
    double sqrtd;
    const int *tab;
    int err;
} ctx;

typedef struct {
    i64 Q, P;
    vres r;
    double lg;
} walker;

static inline vres vr_mul(vres a, vres b) { vres o = {a.v + b.v, (a.t + b.t) % 3}; return o; }
static inline vres vr_div(vres a, vres b) { vres o = {a.v - b.v, (a.t - b.t + 3) % 3}; return o; }

static inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

static inline int ctz128(i128 x)
{
    uint64_t lo = (uint64_t)(u128)x;
    if (lo) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll((uint64_t)((u128)x >> 64));
}

static inline i128 fdiv128(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q--;
    return q;
}

static inline i128 mod128(i128 a, i128 m) /* m > 0, result in [0, m) */
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

static inline i64 mod64(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

static inline i64 fdiv64(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q--;
    return q;
}

/* exact division; flags an arithmetic fault on a remainder */
static inline i128 xdiv(ctx *c, i128 a, i128 b)
{
    if (b == 0 || a % b != 0) { c->err = EK_EARITH; return 0; }
    return a / b;
}

static vres reduce_coords(const ctx *c, i128 x, i128 y)
{
    int vx = x ? ctz128(x) : 1000;
    int vy = y ? ctz128(y) : 1000;
    int v = vx < vy ? vx : vy;
    int px = (int)((x >> v) & 1), py = (int)((y >> v) & 1);
    vres o = {v, c->tab[px | (py << 1)]};
    return o;
}

static inline vres reduce_AB(const ctx *c, i128 A, i128 B) { return reduce_coords(c, A - B, 2 * B); }

static inline vres reduce_rational(i128 n)
{
    vres o = {ctz128(abs128(n)), 0};
    return o;
}

/* ln|A + B sqrt d| without cancellation */
static double log_abs(const ctx *c, i128 A, i128 B)
{
    long double a = (long double)A, b = (long double)B * (long double)c->sqrtd;
    if (A == 0 || B == 0 || (A > 0) == (B > 0))
        return (double)logl(fabsl(a) + fabsl(b));
    long double n;
    if (abs128(A) < ((i128)1 << 60) && abs128(B) < ((i128)1 << 40) && c->d < ((i64)1 << 40))
        n = (long double)(A * A - (i128)c->d * B * B);
    else
        n = a * a - b * b;
    return (double)(logl(fabsl(n)) - logl(fabsl(a) + fabsl(b)));
}

/* ---- ideals ---------------------------------------------------------- */

static inline int ideal_ok(const ctx *c, i64 Q, i64 P)
{
    if (Q <= 0 || (Q & 3) != 2 || (P & 1) == 0) return 0;
    return (((i128)c->d - (i128)P * P) % (2 * (i128)Q)) == 0;
}

static void step(ctx *c, walker *w, i64 P1)
{
    i128 num = (i128)c->d - (i128)P1 * P1;
    if (num % w->Q) { c->err = EK_EARITH; return; }
    i128 Q1 = num / w->Q;
    double inc;
    if (P1 > 0) {
        inc = log(((double)P1 + c->sqrtd) / (double)w->Q);
    } else {
        /* |P1 + sqrt d| / Q = |Q1| / (sqrt d - P1) */
        inc = log((double)abs128(Q1) / (c->sqrtd - (double)P1));
    }
    w->r = vr_div(vr_mul(w->r, reduce_AB(c, P1, 1)), reduce_rational(w->Q));
    w->lg += inc;
    w->Q = (i64)abs128(Q1);
    w->P = P1;
    if (!ideal_ok(c, w->Q, w->P)) c->err = EK_EARITH;
}

static inline void rho(ctx *c, walker *w)
{
    i64 q = fdiv64(w->P + c->s, w->Q);
    step(c, w, q * w->Q - w->P);
}

static inline void rho_centered(ctx *c, walker *w)
{
    i64 P1 = mod64(-w->P, w->Q);
    if (P1 > w->Q / 2) P1 -= w->Q;
    step(c, w, P1);
}

static inline i64 canon_P(const ctx *c, i64 Q, i64 P) { return c->s - mod64(c->s - P, Q); }

static inline int is_reduced(const ctx *c, i64 Q, i64 P) { return Q - canon_P(c, Q, P) <= c->s; }

static void reduce_walker(ctx *c, walker *w)
{
    int steps = 0;
    while ((i128)w->Q * w->Q > 4 * (i128)c->d && !c->err) rho_centered(c, w);
    while (!c->err && !is_reduced(c, w->Q, w->P)) {
        rho(c, w);
        if (++steps > REDUCE_MAX_STEPS) c->err = EK_EARITH;
    }
}

static i128 xgcd128(i128 a, i128 b, i128 *x, i128 *y)
{
    i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b) {
        i128 q = fdiv128(a, b), r = a - q * b, t;
        a = b; b = r;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    *x = x0; *y = y0;
    return a;
}

/* I1 * I2 = S * I3; writes I3 into (*Q3, *P3) and returns S */
static i128 product_plain(ctx *c, i64 Q1, i64 P1, i64 Q2, i64 P2, i64 *Q3, i64 *P3)
{
    i128 a1 = Q1 / 2, b1 = P1, a2 = Q2 / 2, b2 = P2, u, v, w, z;
    i128 m = (b1 + b2) / 2;
    i128 g = xgcd128(a1, a2, &u, &v);
    i128 e = xgcd128(g, m, &w, &z);
    i128 X = w * u, Y = w * v, Z = z;
    i128 a3 = a1 * a2 / (e * e);
    i128 num = X * a1 * b2 + Y * a2 * b1 + Z * ((b1 * b2 + c->d) / 2);
    i128 b3 = mod128(xdiv(c, num, e), 2 * a3);
    *Q3 = (i64)(2 * a3);
    *P3 = (i64)b3;
    if (!ideal_ok(c, *Q3, *P3)) c->err = EK_EARITH;
    return e;
}

/* ---- NUCOMP / NUDUPL ----------------------------------------------- */

typedef struct { i128 u, v, w; } form;
typedef struct { i128 A, B, C; } gam;

static void partial_euclid(i128 *bx_, i128 *by_, i128 *x_, i128 *y_, int *z_, i128 L)
{
    i128 bx = *bx_, by = *by_, x = 1, y = 0, q, t;
    int z = 0;
    while (abs128(by) > L && bx != 0) {
        q = fdiv128(by, bx);
        t = by - q * bx;
        by = bx; bx = t;
        t = y - q * x; y = x; x = t;
        z++;
    }
    if (z & 1) { by = -by; y = -y; }
    *bx_ = bx; *by_ = by; *x_ = x; *y_ = y; *z_ = z;
}

static void nucomp(ctx *c, form f1, form f2, i128 L, form *f3, gam *g)
{
    if (f1.w < f2.w) { form t = f1; f1 = f2; f2 = t; }
    i128 u1 = f1.u, v1 = f1.v, w1 = f1.w, u2 = f2.u, v2 = f2.v, w2 = f2.w;
    i128 s = xdiv(c, v1 + v2, 2), m = v2 - s;
    i128 b, cc, F = xgcd128(u2, u1, &b, &cc);
    i128 G, Bx, By, Cy, Dy, x, y;
    if (mod128(s, F) == 0) {
        G = F; Bx = m * b; By = u1 / G; Cy = u2 / G; Dy = s / G;
    } else {
        G = xgcd128(F, s, &x, &y);
        i128 H = F / G;
        By = u1 / G; Cy = u2 / G; Dy = s / G;
        i128 l = mod128(y * mod128(b * w1 + cc * w2, H), H);
        Bx = xdiv(c, b * m + l * By, H);
    }
    i128 bx = mod128(Bx, By), by = By, ax, ay, u3, v3, w3;
    int z;
    partial_euclid(&bx, &by, &x, &y, &z, L);
    ax = G * x; ay = G * y;
    if (z) {
        i128 cx = xdiv(c, Cy * bx - m * x, By);
        i128 Q1 = by * cx, Q2 = Q1 + m;
        i128 dx = xdiv(c, Dy * bx - w2 * x, By);
        i128 Q3 = y * dx, Q4 = Q3 + Dy;
        i128 dy = xdiv(c, Q4, x), cy;
        if (bx) cy = xdiv(c, Q2, bx);
        else cy = xdiv(c, cx * dy - w1, dx);
        u3 = by * cy - ay * dy;
        w3 = bx * cx - ax * dx;
        v3 = G * (Q3 + Q4) - Q1 - Q2;
    } else {
        i128 Q1 = Cy * bx;
        i128 cx = xdiv(c, Q1 - m, By);
        i128 dx = xdiv(c, bx * Dy - w2, By);
        u3 = by * Cy;
        w3 = bx * cx - G * dx;
        v3 = v2 - 2 * Q1;
    }
    i128 t = 2 * u3;
    f3->u = u3; f3->v = v3; f3->w = w3;
    g->A = G * (x * t + y * v3); g->B = G * y; g->C = t;
}

static void nudupl(ctx *c, form f, i128 L, form *f3, gam *g)
{
    i128 u = f.u, v = f.v, w = f.w, x, y;
    i128 G = xgcd128(u, v, &x, &y);
    i128 By = u / G, Dy = v / G;
    i128 bx = mod128(y * mod128(w, By), By), by = By, ax, ay, u3, v3, w3, dx;
    int z;
    partial_euclid(&bx, &by, &x, &y, &z, L);
    ax = G * x; ay = G * y;
    if (z == 0) {
        dx = xdiv(c, bx * Dy - w, By);
        u3 = by * by;
        w3 = bx * bx;
        v3 = v - (bx + by) * (bx + by) + u3 + w3;
        w3 = w3 - G * dx;
    } else {
        dx = xdiv(c, bx * Dy - w * x, By);
        i128 Q1 = dx * y, dy = Q1 + Dy;
        v3 = G * (dy + Q1);
        dy = xdiv(c, dy, x);
        u3 = by * by;
        w3 = bx * bx;
        v3 = v3 - (bx + by) * (bx + by) + u3 + w3;
        u3 = u3 - ay * dy;
        w3 = w3 - ax * dx;
    }
    i128 t = 2 * u3;
    f3->u = u3; f3->v = v3; f3->w = w3;
    g->A = G * (x * t + y * v3); g->B = G * y; g->C = t;
}

static form ideal_to_form(ctx *c, i64 Q, i64 P)
{
    i128 v = mod128(P, Q);
    form f = {Q / 2, -v, xdiv(c, v * v - c->d, 2 * (i128)Q)};
    return f;
}

/* mu <- anchor * mu / gamma, then reduced */
static void giant_step(ctx *c, const walker *anchor, walker *mu, i128 L)
{
    i64 Q3, P3;
    vres gr;
    double glog;
    if (anchor->Q <= PLAIN_PRODUCT_MAX_Q || mu->Q <= PLAIN_PRODUCT_MAX_Q) {
        i128 S = product_plain(c, anchor->Q, anchor->P, mu->Q, mu->P, &Q3, &P3);
        gr = reduce_rational(S);
        glog = log((double)S);
    } else {
        form f1 = ideal_to_form(c, anchor->Q, anchor->P), f3;
        gam g;
        if (anchor->Q == mu->Q && mod64(anchor->P, anchor->Q) == mod64(mu->P, mu->Q))
            nudupl(c, f1, L, &f3, &g);
        else
            nucomp(c, f1, ideal_to_form(c, mu->Q, mu->P), L, &f3, &g);
        if (c->err) return;
        if (f3.v * f3.v - 4 * f3.u * f3.w != (i128)c->d || g.C == 0 || (g.A == 0 && g.B == 0)) {
            c->err = EK_EARITH;
            return;
        }
        i128 u = abs128(2 * f3.u);
        Q3 = (i64)u;
        P3 = (i64)mod128(-f3.v, u);
        if (!ideal_ok(c, Q3, P3)) { c->err = EK_EARITH; return; }
        gr = vr_div(reduce_AB(c, g.A, g.B), reduce_rational(g.C));
        glog = log_abs(c, g.A, g.B) - log(fabs((double)g.C));
    }
    if (c->err) return;
    mu->r = vr_div(vr_mul(anchor->r, mu->r), gr);
    mu->lg = anchor->lg + mu->lg - glog;
    mu->Q = Q3;
    mu->P = P3;
    reduce_walker(c, mu);
}

/* ---- baby-step stores ------------------------------------------------ */

typedef struct { i64 Q, P; double lg; int t; int used; } slot;

typedef struct {
    int backend;
    slot *tab;          /* hash table (exact) or entry list (bloom) */
    int64_t cap, n;
    uint64_t *bits;     /* bloom only */
    uint64_t m;
    int k;
    int64_t false_positives;
} store;

static inline uint64_t mix64(uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

static inline void key_hashes(i64 Q, i64 P, uint64_t *h1, uint64_t *h2)
{
    *h1 = mix64((uint64_t)Q ^ mix64((uint64_t)P));
    *h2 = mix64(*h1 ^ 0x5851F42D4C957F2DULL) | 1;
}

static int store_init(store *st, int backend, int64_t capacity, double fpr)
{
    memset(st, 0, sizeof *st);
    st->backend = backend;
    if (capacity < 1) capacity = 1;
    if (backend == EK_STORE_EXACT) {
        st->cap = 64;
        while (st->cap < 2 * capacity) st->cap <<= 1;
    } else {
        double m = ceil(-(double)capacity * log(fpr) / (log(2.0) * log(2.0)));
        if (m < 64) m = 64;
        st->m = (uint64_t)m;
        st->k = (int)ceil(m / (double)capacity * log(2.0));
        if (st->k < 1) st->k = 1;
        st->bits = calloc((st->m + 63) / 64, sizeof(uint64_t));
        if (!st->bits) return EK_ENOMEM;
        st->cap = capacity;
    }
    st->tab = calloc((size_t)st->cap, sizeof(slot));
    return st->tab ? EK_OK : EK_ENOMEM;
}

static void store_free(store *st)
{
    free(st->tab);
    free(st->bits);
}

static slot *exact_find(store *st, i64 Q, i64 P)
{
    uint64_t h1, h2, mask = (uint64_t)st->cap - 1;
    key_hashes(Q, P, &h1, &h2);
    uint64_t i = h1 & mask;
    while (st->tab[i].used) {
        if (st->tab[i].Q == Q && st->tab[i].P == P) return &st->tab[i];
        i = (i + 1) & mask;
    }
    return &st->tab[i];
}

static int bloom_maybe(const store *st, i64 Q, i64 P)
{
    uint64_t h1, h2;
    key_hashes(Q, P, &h1, &h2);
    for (int i = 0; i < st->k; i++) {
        uint64_t j = (h1 + (uint64_t)i * h2) % st->m;
        if (!(st->bits[j >> 6] >> (j & 63) & 1)) return 0;
    }
    return 1;
}

static slot *store_lookup(store *st, i64 Q, i64 P)
{
    if (st->backend == EK_STORE_EXACT) {
        slot *s = exact_find(st, Q, P);
        return s->used ? s : NULL;
    }
    if (!bloom_maybe(st, Q, P)) return NULL;
    for (int64_t i = 0; i < st->n; i++)
        if (st->tab[i].Q == Q && st->tab[i].P == P) return &st->tab[i];
    st->false_positives++;
    return NULL;
}

static int store_insert(store *st, i64 Q, i64 P, int t, double lg)
{
    if (st->backend == EK_STORE_EXACT) {
        if (2 * (st->n + 1) > st->cap) {
            slot *old = st->tab;
            int64_t oldcap = st->cap;
            st->cap <<= 1;
            st->tab = calloc((size_t)st->cap, sizeof(slot));
            if (!st->tab) { st->tab = old; return EK_ENOMEM; }
            for (int64_t i = 0; i < oldcap; i++)
                if (old[i].used) *exact_find(st, old[i].Q, old[i].P) = old[i];
            free(old);
        }
        slot *s = exact_find(st, Q, P);
        if (s->used) return EK_OK;
        s->Q = Q; s->P = P; s->t = t; s->lg = lg; s->used = 1;
        st->n++;
        return EK_OK;
    }
    if (store_lookup(st, Q, P)) return EK_OK;
    if (st->n == st->cap) {
        slot *nt = realloc(st->tab, (size_t)(2 * st->cap) * sizeof(slot));
        if (!nt) return EK_ENOMEM;
        st->tab = nt;
        st->cap *= 2;
    }
    slot *s = &st->tab[st->n++];
    s->Q = Q; s->P = P; s->t = t; s->lg = lg; s->used = 1;
    uint64_t h1, h2;
    key_hashes(Q, P, &h1, &h2);
    for (int i = 0; i < st->k; i++) {
        uint64_t j = (h1 + (uint64_t)i * h2) % st->m;
        st->bits[j >> 6] |= 1ULL << (j & 63);
    }
    return EK_OK;
}

/* ---- drivers --------------------------------------------------------- */

static int ctx_init(ctx *c, i64 d, const int *table)
{
    if (d <= 0 || d % 8 != 5) return EK_EBADD;
    c->d = d;
    c->s = (i64)sqrtl((long double)d);
    while ((i128)c->s * c->s > d) c->s--;
    while ((i128)(c->s + 1) * (c->s + 1) <= d) c->s++;
    if ((i128)c->s * c->s == d) return EK_EBADD;
    c->sqrtd = sqrt((double)d);
    c->tab = table;
    c->err = 0;
    return EK_OK;
}

static void init_walker(walker *w)
{
    w->Q = 2; w->P = 1; w->r.v = 0; w->r.t = 0; w->lg = 0.0;
}

int ek_full_walk(int64_t d, const int *table, ek_result *out)
{
    ctx c;
    walker w;
    int rc = ctx_init(&c, d, table);
    if (rc) return rc;
    memset(out, 0, sizeof *out);
    init_walker(&w);
    do {
        rho(&c, &w);
        out->baby_steps++;
        if (c.err) return c.err;
    } while (w.Q != 2);
    if (w.r.v != 0) return EK_EARITH;
    out->t = w.r.t;
    out->method = EK_FULL_WALK;
    out->regulator = w.lg;
    return EK_OK;
}

static int fallback(int64_t d, const int *table, int method, ek_result *out)
{
    ek_result fw;
    int rc = ek_full_walk(d, table, &fw);
    if (rc) return rc;
    out->t = fw.t;
    out->method = method;
    out->baby_steps += fw.baby_steps;
    out->regulator = fw.regulator;
    return EK_OK;
}

int ek_eisenstein(int64_t d, int backend, double fpr, const int *table, ek_result *out)
{
    ctx c;
    store st;
    walker w, anchor, mu;
    int rc = ctx_init(&c, d, table);
    if (rc) return rc;
    memset(out, 0, sizeof *out);

    double bound = pow((double)d, 0.25);
    rc = store_init(&st, backend, (int64_t)(bound / 1.1) + 16, fpr);
    if (rc) { store_free(&st); return rc; }

    init_walker(&w);
    store_insert(&st, 2, canon_P(&c, 2, 1), 0, 0.0);
    i64 prevQ = w.Q, prevP = w.P;
    int extra = -1;
    while (extra < 2) {
        rho(&c, &w);
        out->baby_steps++;
        if (c.err || w.r.v != 0) {
            out->arith_faults += c.err != 0;
            out->valuation_faults += c.err == 0;
            out->store_size = st.n;
            store_free(&st);
            return fallback(d, table, EK_FAULT_FALLBACK, out);
        }
        if (w.Q == 2) {
            out->t = w.r.t;
            out->method = EK_FULL_WALK;
            out->regulator = w.lg;
            out->store_size = st.n;
            store_free(&st);
            return EK_OK;
        }
        if ((rc = store_insert(&st, w.Q, canon_P(&c, w.Q, w.P), w.r.t, w.lg))) {
            store_free(&st);
            return rc;
        }
        if (w.Q == prevQ || w.P == prevP) {
            out->store_size = st.n;
            store_free(&st);
            return fallback(d, table, EK_SYMMETRY_FALLBACK, out);
        }
        prevQ = w.Q;
        prevP = w.P;
        if (extra >= 0) extra++;
        else if (w.lg >= bound) { anchor = w; extra = 0; }
    }
    out->store_size = st.n;

    i128 L = (i128)floor(sqrt((double)c.s));
    while ((L + 1) * (L + 1) * (L + 1) * (L + 1) <= d) L++;
    while (L * L * L * L > d) L--;
    int64_t cap = (int64_t)(20 * (bound + 10));
    mu = anchor;
    int method = EK_CAP_FALLBACK;
    for (int64_t k = 1; k <= cap; k++) {
        giant_step(&c, &anchor, &mu, L);
        out->giant_steps = k;
        if (c.err) { out->arith_faults++; method = EK_FAULT_FALLBACK; break; }
        if (mu.r.v != 0) { out->valuation_faults++; method = EK_FAULT_FALLBACK; break; }
        slot *hit = store_lookup(&st, mu.Q, canon_P(&c, mu.Q, mu.P));
        if (hit) {
            double dist = mu.lg - hit->lg;
            if (dist > MIN_PERIOD_LOG) {
                out->t = (mu.r.t - hit->t + 3) % 3;
                out->method = EK_BSGS;
                out->regulator = dist;
                out->bloom_false_positives = st.false_positives;
                store_free(&st);
                return EK_OK;
            }
        }
    }
    out->bloom_false_positives = st.false_positives;
    store_free(&st);
    return fallback(d, table, method, out);
}
