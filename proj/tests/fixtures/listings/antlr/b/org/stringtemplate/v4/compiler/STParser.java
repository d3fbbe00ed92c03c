// $ANTLR 3.5.3 org/stringtemplate/v4/compiler/STParser.g 2024-03-08 16:45:10

package org.stringtemplate.v4.compiler;
import org.stringtemplate.v4.misc.ErrorManager;
import org.stringtemplate.v4.misc.ErrorType;

import org.antlr.runtime.*;
import java.util.Stack;
import java.util.List;
import java.util.ArrayList;

import org.antlr.runtime.tree.*;


@SuppressWarnings("all")
public class STParser extends Parser {
	public static final int EOF=-1;
	public static final int RBRACK=17;
	public static final int LBRACK=16;

	public Parser[] getDelegates() {
		return new Parser[] {};
	}

	public STParser(TokenStream input, RecognizerSharedState state) {
		super(input, state);
	}

	protected TreeAdaptor adaptor = new CommonTreeAdaptor();

	public static class ifstat_return extends ParserRuleReturnScope {
		CommonTree tree;
		@Override
		public CommonTree getTree() { return tree; }
	}

	public final STParser.ifstat_return ifstat() throws RecognitionException {
		STParser.ifstat_return retval = new STParser.ifstat_return();
		retval.start = input.LT(1);
		CommonTree root_0 = null;
		RewriteRuleSubtreeStream stream_c1=new RewriteRuleSubtreeStream(adaptor,"rule c1");
		RewriteRuleSubtreeStream stream_c2=new RewriteRuleSubtreeStream(adaptor,"rule c2");
		RewriteRuleSubtreeStream stream_t2=new RewriteRuleSubtreeStream(adaptor,"rule t2");
		try {
			root_0 = (CommonTree)adaptor.nil();
			{
				CommonTree root_1 = (CommonTree)adaptor.nil();
				adaptor.addChild(root_1, stream_c1.nextTree());
				while ( stream_t2.hasNext()||stream_c2.hasNext() ) {
					adaptor.addChild(root_1, stream_c2.nextTree());
					adaptor.addChild(root_1, stream_t2.nextTree());
				}
				stream_t2.reset();
				stream_c2.reset();
				adaptor.addChild(root_0, root_1);
			}
			retval.tree = root_0;
		}
		catch (RecognitionException re) {
			reportError(re);
			recover(input,re);
		}
		return retval;
	}
}
