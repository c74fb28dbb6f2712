void OverlappingTemplateMatchings(int m, int n)
{
int				i, k, match;
double			W_obs, eta, sum, chi2, p_value, lambda;
int				M, N, j, K = 5;
unsigned int	nu[6] = { 0, 0, 0, 0, 0, 0 };
//double			pi[6] = { 0.143783, 0.139430, 0.137319, 0.124314, 0.106209, 0.348945 };
double			pi[6] = { 0.364091, 0.185659, 0.139381, 0.100571, 0.0704323, 0.139865 };
BitSequence		*sequence;
M = 1032;
N = n/M;
if ( (sequence = (BitSequence *) calloc(m, sizeof(BitSequence))) == NULL ) {
    // ERROR
}
else
    for ( i=0; i<m; i++ )
        sequence[i] = 1;
lambda = (double)(M-m+1)/pow(2,m);
eta = lambda/2.0;
sum = 0.0;
for ( i=0; i<K; i++ ) {			/* Compute Probabilities */
    pi[i] = Pr(i, eta);
    sum += pi[i];
}
pi[K] = 1 - sum;

for ( i=0; i<N; i++ ) {
  W_obs = 0;
  for ( j=0; j<M-m+1; j++ ) {
    match = 1;
    for ( k=0; k<m; k++ ) {
     if ( sequence[k] != epsilon[i*M+j+k] )
        match = 0;
     }
     if ( match == 1 )
       W_obs++;
    }
    if ( W_obs <= 4 )
     nu[(int)W_obs]++;
    else
     nu[K]++;
}
sum = 0;
chi2 = 0.0;                                   /* Compute Chi Square */
for ( i=0; i<K+1; i++ ) {
    chi2 += pow((double)nu[i] - (double)N*pi[i], 2)/((double)N*pi[i]);
    sum += nu[i];
}
p_value = cephes_igamc(K/2.0, chi2/2.0);
}
