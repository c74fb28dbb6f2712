typedef unsigned char BitSequence;
static BitSequence *epsilon;
