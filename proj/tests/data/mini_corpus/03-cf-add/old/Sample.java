class Sample {
  int count = 0;
  void fail(int code) {
    report(code);
  }
}
