// Function to swap two elements
void swap(int* a, int* b){
int temp = *a;
*a = *b;
*b = temp;}
int partition(int arr[], int low, int high){
int pivot = arr[low];
int i = low;
int j = high;
while (i < j){
    while (arr[i] <= pivot && i <= high - 1){
        i++;
    }
    while (arr[j] > pivot && j >= low + 1){
        j--;
    }
    if (i < j){
        swap(&arr[i], &arr[j]);
    }
}
swap(&arr[low], &arr[j]);
return j;
}
void quickSort(int arr[64], int low, int high){
int stack[128]; // Fixed size stack to work with HLS tools
int top = -1;
stack[++top] = low;
stack[++top] = high;
while (top >= 0){
    high = stack[top--];
    low = stack[top--];
    if (low < high){
        int partitionIndex = partition(arr, low, high);
        stack[++top] = low;
        stack[++top] = partitionIndex - 1;
        stack[++top] = partitionIndex + 1;
        stack[++top] = high;
}}}
