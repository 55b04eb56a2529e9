/** Tiny synthetic datasets in the exact thzgeo output format. */

export const COVERAGE_CSV = `# thzgeo 0.1.0
# command: coverage
# network.lambda_t = 0.01
curve,x,tau_t,tau_r,coverage_analytic,coverage_mc,coverage_mc_ci95,bias_used,terms_used,quad_error
a,100,100,100,0.98793391995984614,0.99299999999999999,0.0036611,1,84,3.04e-07
a,316.22776601683796,316.22776601683796,316.22776601683796,0.83487775057069058,0.83650000000000002,0.0162051,1,84,0.0003083
a,1000,1000,1000,0.37010986483494657,0.375,0.0211982,1,84,0.0010940
b,100,100,100,0.99899999999999999,0.996,0.0029226,1,84,1.0e-07
b,316.22776601683796,316.22776601683796,316.22776601683796,0.90000000000000002,0.897,0.0140000,1,84,0.0001
b,1000,1000,1000,0.55000000000000004,0.553,0.0180000,1,84,0.0008
`;

export const LT_CSV = `# thzgeo 0.1.0
# command: lt
curve,s,lt_analytic_l1,lt_analytic_l3,lt_mc,lt_mc_ci95
lam,465233184.11114001,0.98011579475742205,0.98019125638460403,0.97948626710350584,0.000849
lam,4652331841.1114001,0.76102744941321445,0.76181894489509336,0.76002744941321443,0.002849
lam,46523318411.114001,0.16078244941321444,0.16281894489509335,0.16102744941321445,0.001149
`;

export const EMPTY_CELL_CSV = `# thzgeo 0.1.0
# command: assoc
curve,lambda_t,p_assoc_quadrature,p_assoc_series,p_assoc_asymptotic,p_assoc_mc,p_assoc_mc_ci95,bias_used,series_flag
,0.001,0.3525,,0.41,0.3683,0.0067,1,divergent
,0.01,0.8603,0.8622,0.9258,0.8642,0.0048,1,
`;

export const SINGLE_ROW_CSV = `# thzgeo 0.1.0
# command: coverage
curve,x,tau_t,tau_r,coverage_analytic,coverage_mc,coverage_mc_ci95,bias_used,terms_used,quad_error
only,10,10,10,0.5,0.51,0.02,1,12,1e-06
`;

export const CORRUPT_CSV = `# thzgeo 0.1.0
curve,x,coverage_analytic
a,1,0.5
a,2
`;
