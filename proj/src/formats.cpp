namespace symta {}
